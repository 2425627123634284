//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/baselines.hpp"

#include <cmath>
#include <limits>

namespace itemfield {

double predict_classical(const ItemGraph &graph, const ItemMeans &means,
                         std::span<const double> dense_ratings, Index i) {
  double num = 0.0;
  double den = 0.0;
  const auto &sim = graph.sim();
  for (const auto &nb : graph.neighbours(i)) {
    const double r = dense_ratings[nb.node];
    const double s = sim[nb.edge];
    if (std::isnan(r) || !(s > 0.0))
      continue;
    num += s * (r - means.mu[nb.node]);
    den += s;
  }
  return den > 0.0 ? means.mu[i] + num / den : means.mu[i];
}

double predict_classical(const ItemGraph &graph, const ItemMeans &means,
                         const KnownRatings &user_ratings, Index i) {
  std::vector<double> dense(graph.num_items(),
                            std::numeric_limits<double>::quiet_NaN());
  for (const auto &[item, r] : user_ratings)
    if (item != i)
      dense[item] = r;
  return predict_classical(graph, means, dense, i);
}

}  // namespace itemfield
