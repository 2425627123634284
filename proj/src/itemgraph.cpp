//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/itemgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "itemfield/error.hpp"

namespace itemfield {

ItemGraph::ItemGraph(std::size_t num_items, std::size_t k,
                     std::vector<Edge> edges, std::vector<double> sim)
    : num_items_(num_items), k_(k) {
  if (sim.empty())
    sim.assign(edges.size(), 0.0);
  if (sim.size() != edges.size())
    throw ValidationError("edge and similarity counts differ");

  std::vector<std::size_t> order(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto &[i, j] = edges[e];
    if (i == j)
      throw ValidationError("self-loop on item " + std::to_string(i));
    if (i > j)
      std::swap(i, j);
    if (i < 0 || static_cast<std::size_t>(j) >= num_items)
      throw ValidationError("edge endpoint out of range");
    order[e] = e;
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });

  edges_.reserve(edges.size());
  sim_.reserve(edges.size());
  for (auto e : order) {
    if (!edges_.empty() && edges_.back() == edges[e])
      throw ValidationError("duplicate edge (" + std::to_string(edges[e].i) +
                            ", " + std::to_string(edges[e].j) + ")");
    edges_.push_back(edges[e]);
    sim_.push_back(sim[e]);
  }

  std::vector<std::size_t> degree(num_items_, 0);
  for (const auto &e : edges_) {
    ++degree[e.i];
    ++degree[e.j];
  }
  offsets_.assign(num_items_ + 1, 0);
  for (std::size_t i = 0; i < num_items_; ++i)
    offsets_[i + 1] = offsets_[i] + degree[i];
  adj_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [i, j] = edges_[e];
    adj_[fill[i]++] = {j, static_cast<Index>(e)};
    adj_[fill[j]++] = {i, static_cast<Index>(e)};
  }
}

Index ItemGraph::find_edge(Index i, Index j) const {
  if (i > j)
    std::swap(i, j);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{i, j});
  if (it == edges_.end() || *it != Edge{i, j})
    return -1;
  return static_cast<Index>(it - edges_.begin());
}

SparseSymmetric::SparseSymmetric(GraphPtr graph)
    : graph_(std::move(graph)), diag_(graph_->num_items(), 0.0),
      offdiag_(graph_->num_edges(), 0.0) {}

SparseSymmetric::SparseSymmetric(GraphPtr graph, std::vector<double> diag,
                                 std::vector<double> offdiag)
    : graph_(std::move(graph)), diag_(std::move(diag)),
      offdiag_(std::move(offdiag)) {
  if (diag_.size() != graph_->num_items() ||
      offdiag_.size() != graph_->num_edges())
    throw ValidationError("sparse symmetric values do not match the pattern");
}

double SparseSymmetric::at(Index i, Index j) const {
  if (i == j)
    return diag_[i];
  auto e = graph_->find_edge(i, j);
  return e < 0 ? 0.0 : offdiag_[e];
}

void SparseSymmetric::multiply(std::span<const double> x,
                               std::span<double> y) const {
  for (std::size_t i = 0; i < diag_.size(); ++i)
    y[i] = diag_[i] * x[i];
  const auto &edges = graph_->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    y[edges[e].i] += offdiag_[e] * x[edges[e].j];
    y[edges[e].j] += offdiag_[e] * x[edges[e].i];
  }
}

std::vector<double> SparseSymmetric::multiply(std::span<const double> x) const {
  std::vector<double> y(diag_.size());
  multiply(x, y);
  return y;
}

std::vector<double> SparseSymmetric::dense() const {
  const auto n = diag_.size();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    a[i * n + i] = diag_[i];
  const auto &edges = graph_->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    a[edges[e].i * n + edges[e].j] = offdiag_[e];
    a[edges[e].j * n + edges[e].i] = offdiag_[e];
  }
  return a;
}

Similarity parse_similarity(const std::string &name) {
  if (name == "pearson")
    return Similarity::kPearson;
  if (name == "cosine")
    return Similarity::kCosine;
  throw ValidationError("unknown similarity '" + name +
                        "' (expected pearson or cosine)");
}

std::string to_string(Similarity measure) {
  return measure == Similarity::kPearson ? "pearson" : "cosine";
}

namespace {
  struct PairSums {
    double xy = 0.0;
    double xx = 0.0;
    double yy = 0.0;
    std::size_t n = 0;

    void add(double x, double y) {
      xy += x * y;
      xx += x * x;
      yy += y * y;
      ++n;
    }

    double correlation() const { return correlation(xx, yy); }

    // Against externally supplied squared norms.
    double correlation(double nx, double ny) const {
      if (n < kMinCorated || nx <= 0.0 || ny <= 0.0)
        return 0.0;
      return std::clamp(xy / (std::sqrt(nx) * std::sqrt(ny)), -1.0, 1.0);
    }
  };

  // Walks the co-raters of i and j in increasing user order.
  template <class F>
  void for_each_corater(const RatingsDataset &ds, Index i, Index j, F &&f) {
    const auto &a = ds.by_item(i);
    const auto &b = ds.by_item(j);
    const auto &t = ds.triples();
    std::size_t p = 0, q = 0;
    while (p < a.size() && q < b.size()) {
      const auto &ra = t[a[p]];
      const auto &rb = t[b[q]];
      if (ra.user < rb.user) {
        ++p;
      } else if (rb.user < ra.user) {
        ++q;
      } else {
        f(ra.value, rb.value);
        ++p;
        ++q;
      }
    }
  }

  double centred(Similarity measure, const ItemMeans &means, Index item,
                 double r) {
    return measure == Similarity::kPearson ? r - means.mu[item] : r;
  }

  // Squared deviation norm of every item over all of its raters. Users who
  // did not rate an item sit at its mean and add nothing.
  std::vector<double> deviation_norms(const RatingsDataset &train,
                                      const ItemMeans &means) {
    std::vector<double> norm(train.num_items(), 0.0);
    for (Index i = 0; i < static_cast<Index>(train.num_items()); ++i)
      for (auto p : train.by_item(i)) {
        const double d = train.triples()[p].value - means.mu[i];
        norm[i] += d * d;
      }
    return norm;
  }
}  // namespace

double pearson_similarity(const RatingsDataset &train, const ItemMeans &means,
                          Index i, Index j) {
  PairSums s;
  for_each_corater(train, i, j, [&](double ri, double rj) {
    s.add(ri - means.mu[i], rj - means.mu[j]);
  });
  double ni = 0.0, nj = 0.0;
  for (auto p : train.by_item(i)) {
    const double d = train.triples()[p].value - means.mu[i];
    ni += d * d;
  }
  for (auto p : train.by_item(j)) {
    const double d = train.triples()[p].value - means.mu[j];
    nj += d * d;
  }
  return s.correlation(ni, nj);
}

double cosine_similarity(const RatingsDataset &train, Index i, Index j) {
  PairSums s;
  for_each_corater(train, i, j, [&](double ri, double rj) { s.add(ri, rj); });
  return s.correlation();
}

ItemGraph top_k_union(std::size_t num_items, std::size_t k,
                      const CandidateFn &candidates_of) {
  if (k < 1)
    throw ValidationError("neighbour budget k must be at least 1");

  std::vector<std::pair<double, Index>> candidates;
  std::vector<Edge> picks;
  std::vector<double> pick_sim;
  for (Index i = 0; i < static_cast<Index>(num_items); ++i) {
    candidates.clear();
    candidates_of(i, candidates);
    std::erase_if(candidates, [&](const auto &c) {
      return c.first == 0.0 || c.second == i || !std::isfinite(c.first);
    });
    const auto take = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take,
                      candidates.end(), [](const auto &a, const auto &b) {
                        return a.first > b.first ||
                               (a.first == b.first && a.second < b.second);
                      });
    for (std::size_t c = 0; c < take; ++c) {
      picks.push_back({std::min(i, candidates[c].second),
                       std::max(i, candidates[c].second)});
      pick_sim.push_back(candidates[c].first);
    }
  }

  // A pair picked from both sides appears twice; keep one copy.
  std::vector<std::size_t> order(picks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return picks[a] < picks[b]; });
  std::vector<Edge> edges;
  std::vector<double> sim;
  for (auto p : order) {
    if (!edges.empty() && edges.back() == picks[p])
      continue;
    edges.push_back(picks[p]);
    sim.push_back(pick_sim[p]);
  }
  return ItemGraph(num_items, k, std::move(edges), std::move(sim));
}

ItemGraph build_graph(const RatingsDataset &train, const ItemMeans &means,
                      std::size_t k, Similarity measure) {
  const auto &t = train.triples();

  // Row i of the similarity matrix is accumulated by scanning the users who
  // rated i in increasing order; the sums for (i, j) and (j, i) therefore
  // see the same terms in the same order.
  const bool pearson = measure == Similarity::kPearson;
  const auto norm = pearson ? deviation_norms(train, means) : std::vector<double>{};
  std::vector<PairSums> acc(train.num_items());
  std::vector<Index> touched;
  auto candidates_of = [&](Index i, std::vector<std::pair<double, Index>> &out) {
    touched.clear();
    for (auto pi : train.by_item(i)) {
      const auto &ri = t[pi];
      const double x = centred(measure, means, i, ri.value);
      for (auto pj : train.by_user(ri.user)) {
        const auto &rj = t[pj];
        if (rj.item == i)
          continue;
        if (acc[rj.item].n == 0)
          touched.push_back(rj.item);
        acc[rj.item].add(x, centred(measure, means, rj.item, rj.value));
      }
    }
    for (auto j : touched) {
      out.emplace_back(pearson ? acc[j].correlation(norm[i], norm[j])
                               : acc[j].correlation(),
                       j);
      acc[j] = PairSums{};
    }
  };
  return top_k_union(train.num_items(), k, candidates_of);
}

std::size_t count_active_users(const RatingsDataset &train) {
  std::size_t active = 0;
  for (Index u = 0; u < static_cast<Index>(train.num_users()); ++u)
    active += train.by_user(u).empty() ? 0 : 1;
  return active;
}

SparseSymmetric compute_moments(const RatingsDataset &train,
                                const ItemMeans &means, GraphPtr graph) {
  if (graph->num_items() != train.num_items())
    throw ValidationError("graph and dataset disagree on the item count");

  const auto users = static_cast<double>(count_active_users(train));
  if (users == 0.0)
    throw ValidationError("no training users");

  SparseSymmetric sigma(graph);
  const auto &t = train.triples();
  for (Index i = 0; i < static_cast<Index>(train.num_items()); ++i) {
    double s = 0.0;
    for (auto p : train.by_item(i)) {
      const double d = t[p].value - means.mu[i];
      s += d * d;
    }
    sigma.diag()[i] = std::max(s / users, kVarianceFloor);
  }

  const auto &edges = graph->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    double s = 0.0;
    for_each_corater(train, i, j, [&](double ri, double rj) {
      s += (ri - means.mu[i]) * (rj - means.mu[j]);
    });
    sigma.offdiag()[e] = s / users;
  }
  return sigma;
}

SufficientStats prepare_stats(const RatingsDataset &train, std::size_t k,
                              Similarity measure) {
  SufficientStats stats;
  stats.means = compute_item_means(train);
  stats.item_ids = train.items().raws();
  stats.num_users = count_active_users(train);
  auto graph = std::make_shared<const ItemGraph>(
      build_graph(train, stats.means, k, measure));
  stats.sigma = compute_moments(train, stats.means, std::move(graph));
  return stats;
}

}  // namespace itemfield
