//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_MAXENT_HPP
#define ITEMFIELD_MAXENT_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "itemfield/itemgraph.hpp"
#include "itemfield/model.hpp"

namespace itemfield {

/// Edges whose belief minor C_ii C_jj - C_ij^2 falls below this fraction of
/// C_ii C_jj are treated as degenerate during ascent. Exactly collinear
/// items otherwise pick up weights of order 1/eps from rounding alone.
inline constexpr double kDegenerateMinor = 1e-10;

/// How the edge multipliers enter the diagonal gradient of the ascent.
///
/// kAsPrinted adds theta_ij once. kEntropyConsistent adds 2 theta_ij, the
/// derivative of the Bethe entropy along the constraint surface, and reports
/// those doubled multipliers as the edge weights.
enum class MultiplierConvention { kAsPrinted, kEntropyConsistent };

MultiplierConvention parse_convention(const std::string &name);
std::string to_string(MultiplierConvention convention);

/// Snapshot handed to the hook after every ascent iteration. `theta` holds
/// the (unclamped) edge weights of this iteration, i.e. what training would
/// return if it stopped here; `c_diag` and `c_off` are the beliefs after the
/// step.
struct AscentState {
  std::size_t iteration;  // 1-based
  std::span<const double> theta;
  std::span<const double> c_diag;
  std::span<const double> c_off;
};

/// Returning true stops training.
using IterationHook = std::function<bool(const AscentState &)>;

struct TrainConfig {
  double alpha = 1.0;
  std::size_t iterations = 40;
  double ridge = 0.0;
  MultiplierConvention convention = MultiplierConvention::kAsPrinted;
  IterationHook early_stop;

  // Likelihood trainers.
  std::size_t memory = 10;
  double pgtol = 1e-5;
  double ftol = 1e-10;

  static TrainConfig maxent_defaults() { return {}; }
  static TrainConfig ml_defaults() {
    TrainConfig cfg;
    cfg.iterations = 500;
    cfg.ridge = 1e-3;
    return cfg;
  }

  void validate() const;
};

/// Pseudo-moment-matching precision for moments sigma:
///   theta_ij = -s_ij / (s_ii s_jj - s_ij^2)
///   theta_ii = 1/s_ii + sum_j (s_jj / (s_ii s_jj - s_ij^2) - 1/s_ii).
/// Throws ValidationError naming the first edge whose 2x2 minor is not
/// positive.
SparseSymmetric closed_form_theta(const SparseSymmetric &sigma);

/// Diagonal ascent on the Bethe entropy with the diagonal constraint
/// substituted. Returns the clamped (<= 0) edge weights.
///
/// Each iteration rebuilds theta from the current beliefs C (an edge is
/// kept only while its 2x2 minor is non-degenerate and C_ij > 0), moves
/// every C_ii by alpha/sqrt(k) (theta_ii + m sum_j theta_ij) / kappa_i and
/// then resets
///   C_ij = s_ij - s_ii - s_jj + C_ii + C_jj.
/// kappa_i is the summed curvature magnitude of the entropy terms touching
/// C_ii, which makes alpha dimensionless. Throws TrainingError if some C_ii
/// leaves the positive half-line.
std::vector<double> diagonal_ascent(const SparseSymmetric &sigma,
                                    const TrainConfig &cfg);

ItemFieldModel train_maxent(const SufficientStats &stats,
                            const TrainConfig &cfg);

/// Packages edge weights with the stats' means, ids and graph.
ItemFieldModel make_model(const SufficientStats &stats,
                          std::vector<double> theta, double ridge);

}  // namespace itemfield

#endif  // ITEMFIELD_MAXENT_HPP
