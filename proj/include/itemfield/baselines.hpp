//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_BASELINES_HPP
#define ITEMFIELD_BASELINES_HPP

#include <span>

#include "itemfield/itemgraph.hpp"
#include "itemfield/predict.hpp"

namespace itemfield {

/// Classical neighbourhood rule
///   r_i = mu_i + sum_j s_ji (r_j - mu_j) / sum_j s_ji
/// over the rated neighbours of i with positive similarity. Returns mu_i
/// when no such neighbour exists. Unclamped.
double predict_classical(const ItemGraph &graph, const ItemMeans &means,
                         const KnownRatings &user_ratings, Index i);

/// Same rule on a dense rating vector, NaN marking unrated items.
double predict_classical(const ItemGraph &graph, const ItemMeans &means,
                         std::span<const double> dense_ratings, Index i);

}  // namespace itemfield

#endif  // ITEMFIELD_BASELINES_HPP
