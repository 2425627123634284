//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_ITEMGRAPH_HPP
#define ITEMFIELD_ITEMGRAPH_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "itemfield/dataset.hpp"

namespace itemfield {

struct Edge {
  Index i;
  Index j;

  friend bool operator==(const Edge &, const Edge &) = default;
  friend auto operator<=>(const Edge &, const Edge &) = default;
};

struct Neighbour {
  Index node;
  Index edge;
};

/// Undirected item graph. Edges are stored once, canonically (i < j), sorted
/// lexicographically; each carries the similarity that selected it.
class ItemGraph {
public:
  ItemGraph() = default;

  /// Sorts the edges canonically. Throws ValidationError on self-loops,
  /// duplicates or out-of-range endpoints.
  ItemGraph(std::size_t num_items, std::size_t k, std::vector<Edge> edges,
            std::vector<double> sim = {});

  std::size_t num_items() const noexcept { return num_items_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t k() const noexcept { return k_; }

  const std::vector<Edge> &edges() const noexcept { return edges_; }
  const std::vector<double> &sim() const noexcept { return sim_; }

  std::span<const Neighbour> neighbours(Index i) const {
    return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
  }
  std::size_t degree(Index i) const { return offsets_[i + 1] - offsets_[i]; }

  /// Edge index of {i, j}, or -1.
  Index find_edge(Index i, Index j) const;

private:
  std::size_t num_items_ = 0;
  std::size_t k_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> sim_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbour> adj_;
};

using GraphPtr = std::shared_ptr<const ItemGraph>;

/// Symmetric matrix whose off-diagonal sparsity pattern is a graph's edge
/// set. Holds the moment matrix, belief covariances and precision
/// parameters alike.
class SparseSymmetric {
public:
  SparseSymmetric() = default;
  explicit SparseSymmetric(GraphPtr graph);
  SparseSymmetric(GraphPtr graph, std::vector<double> diag,
                  std::vector<double> offdiag);

  std::size_t size() const noexcept { return diag_.size(); }
  const ItemGraph &graph() const noexcept { return *graph_; }
  const GraphPtr &graph_ptr() const noexcept { return graph_; }

  std::vector<double> &diag() noexcept { return diag_; }
  const std::vector<double> &diag() const noexcept { return diag_; }
  std::vector<double> &offdiag() noexcept { return offdiag_; }
  const std::vector<double> &offdiag() const noexcept { return offdiag_; }

  /// Entry (i, j); zero off the pattern.
  double at(Index i, Index j) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  /// Row-major dense copy, n x n.
  std::vector<double> dense() const;

private:
  GraphPtr graph_;
  std::vector<double> diag_;
  std::vector<double> offdiag_;
};

enum class Similarity { kPearson, kCosine };

Similarity parse_similarity(const std::string &name);
std::string to_string(Similarity measure);

/// Similarities with fewer co-raters than this are zero.
inline constexpr std::size_t kMinCorated = 2;
/// Floor applied to the moment diagonal, in rating^2.
inline constexpr double kVarianceFloor = 1e-6;

/// Pearson correlation of items i and j with deviations from the item means.
/// Users who rated only one of the two count as rating the other at its
/// mean: the cross term runs over co-raters, each norm over all raters of
/// its item. Zero below kMinCorated co-raters.
double pearson_similarity(const RatingsDataset &train, const ItemMeans &means,
                          Index i, Index j);

/// Cosine of the raw co-rated rating vectors.
double cosine_similarity(const RatingsDataset &train, Index i, Index j);

/// Fills the (similarity, partner) candidates of one item.
using CandidateFn =
    std::function<void(Index, std::vector<std::pair<double, Index>> &)>;

/// Each item picks its k highest-similarity candidates (zero similarities
/// dropped, ties to the lower id); the edge set is the union of all picks.
ItemGraph top_k_union(std::size_t num_items, std::size_t k,
                      const CandidateFn &candidates_of);

/// k-nearest-neighbour item graph under the given measure.
ItemGraph build_graph(const RatingsDataset &train, const ItemMeans &means,
                      std::size_t k, Similarity measure);

/// Number of users with at least one training rating.
std::size_t count_active_users(const RatingsDataset &train);

/// Edge-restricted second moments of the mean-imputed rating matrix:
///   sigma_ij = (1/U) sum_u d_ui d_uj,   d_ui = r_ui - mu_i or 0 if unrated,
/// with U the number of training users and the diagonal floored at
/// kVarianceFloor.
SparseSymmetric compute_moments(const RatingsDataset &train,
                                const ItemMeans &means, GraphPtr graph);

/// Everything training needs, as persisted in a stats file.
struct SufficientStats {
  ItemMeans means;
  std::vector<std::int64_t> item_ids;  // raw id per dense item
  std::size_t num_users = 0;
  SparseSymmetric sigma;

  const ItemGraph &graph() const { return sigma.graph(); }
};

SufficientStats prepare_stats(const RatingsDataset &train, std::size_t k,
                              Similarity measure);

}  // namespace itemfield

#endif  // ITEMFIELD_ITEMGRAPH_HPP
