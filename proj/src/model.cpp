//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/model.hpp"

#include <cmath>

#include "itemfield/error.hpp"

namespace itemfield {

void ItemFieldModel::validate() const {
  if (!graph)
    throw ValidationError("model has no graph");
  if (theta.size() != graph->num_edges())
    throw ValidationError("model weight count differs from the edge count");
  if (means.mu.size() != graph->num_items() ||
      item_ids.size() != graph->num_items())
    throw ValidationError("model item count differs from the graph");
  if (!(ridge >= 0.0) || !std::isfinite(ridge))
    throw ValidationError("model ridge must be finite and non-negative");
  for (std::size_t e = 0; e < theta.size(); ++e)
    if (!(theta[e] <= 0.0) || !std::isfinite(theta[e])) {
      const auto [i, j] = graph->edges()[e];
      throw ValidationError("edge (" + std::to_string(i) + ", " +
                            std::to_string(j) +
                            ") has a positive or non-finite weight");
    }
}

SparseSymmetric build_precision(const ItemFieldModel &model) {
  SparseSymmetric p(model.graph);
  p.offdiag() = model.theta;
  for (auto &d : p.diag())
    d = model.ridge;
  const auto &edges = model.graph->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    p.diag()[edges[e].i] -= model.theta[e];
    p.diag()[edges[e].j] -= model.theta[e];
  }
  return p;
}

}  // namespace itemfield
