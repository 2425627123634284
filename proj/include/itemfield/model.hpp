//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_MODEL_HPP
#define ITEMFIELD_MODEL_HPP

#include <cstdint>
#include <vector>

#include "itemfield/dataset.hpp"
#include "itemfield/itemgraph.hpp"

namespace itemfield {

/// Gaussian field over items. The precision has the non-positive edge
/// weights `theta` off the diagonal and a diagonal fixed by the graph
/// Laplacian plus `ridge`:
///   theta_ii = ridge - sum_{j in ne(i)} theta_ij.
struct ItemFieldModel {
  ItemMeans means;
  std::vector<std::int64_t> item_ids;  // raw id per dense item
  GraphPtr graph;
  std::vector<double> theta;  // per edge, <= 0
  double ridge = 0.0;

  std::size_t num_items() const { return graph->num_items(); }

  /// Throws ValidationError on a positive or non-finite weight, a negative
  /// ridge, or sizes that disagree with the graph.
  void validate() const;
};

/// Materializes the precision matrix of a model.
SparseSymmetric build_precision(const ItemFieldModel &model);

}  // namespace itemfield

#endif  // ITEMFIELD_MODEL_HPP
