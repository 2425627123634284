//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_PREDICT_HPP
#define ITEMFIELD_PREDICT_HPP

#include <optional>
#include <utility>
#include <vector>

#include "itemfield/model.hpp"
#include "itemfield/sparsela.hpp"

namespace itemfield {

/// (item, rating) pairs a user has already rated.
using KnownRatings = std::vector<std::pair<Index, double>>;

struct PredictionResult {
  std::vector<Index> items;  // the unknown set U, increasing
  std::vector<double> mean_raw;
  std::vector<double> mean_clamped;
  /// Conditional variances when requested; +inf for fallback items.
  std::optional<std::vector<double>> variance;
  std::vector<char> fallback;  // 1 where the item mean was used
};

struct PredictOptions {
  bool want_variance = false;
  double tol = kSolveTol;
  std::size_t max_iters = kMaxBpIters;
};

/// Conditional mean (and optionally variance) of every unrated item:
///   mean_U = mu_U - theta_UU^-1 theta_UK (r_K - mu_K).
/// Connected components of the unknown items that have no edge of nonzero
/// weight into K keep their item means when the ridge is zero. Means use a
/// sparse CG solve; variance requests go through belief propagation.
PredictionResult predict_user(const ItemFieldModel &model,
                              const KnownRatings &known,
                              const PredictOptions &options = {});

struct BlanketPrediction {
  double mean;
  std::optional<double> variance;
};

/// Univariate conditional of item i given ratings for all its neighbours:
///   mean = mu_i - sum_j theta_ij (r_j - mu_j) / theta_ii
///   variance = 1 / theta_ii,   theta_ii = ridge - sum_j theta_ij.
/// Falls back to (mu_i, no variance) when theta_ii is zero.
BlanketPrediction predict_markov_blanket(const ItemFieldModel &model, Index i,
                                         const KnownRatings &neighbour_ratings);

/// Clamps to the rating scale [1, 5]. Throws ValidationError if x is not
/// finite.
double clamp_rating(double x);

}  // namespace itemfield

#endif  // ITEMFIELD_PREDICT_HPP
