//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "itemfield/error.hpp"

namespace itemfield {

double clamp_rating(double x) {
  if (!std::isfinite(x))
    throw ValidationError("cannot clamp a non-finite prediction");
  return std::clamp(x, kMinRating, kMaxRating);
}

PredictionResult predict_user(const ItemFieldModel &model,
                              const KnownRatings &known,
                              const PredictOptions &options) {
  const auto n = model.num_items();
  if (n == 0)
    throw ValidationError("cannot predict over an empty item universe");

  const auto &g = *model.graph;
  std::vector<double> deviation(n, 0.0);
  std::vector<char> is_known(n, 0);
  for (const auto &[item, rating] : known) {
    if (item < 0 || static_cast<std::size_t>(item) >= n)
      throw ValidationError("known item out of range");
    if (is_known[item])
      throw ValidationError("known item " + std::to_string(item) +
                            " listed twice");
    if (!(rating >= kMinRating && rating <= kMaxRating))
      throw ValidationError("known rating outside [1,5]");
    is_known[item] = 1;
    deviation[item] = rating - model.means.mu[item];
  }

  PredictionResult out;
  for (Index i = 0; i < static_cast<Index>(n); ++i)
    if (!is_known[i])
      out.items.push_back(i);
  const auto m = out.items.size();
  out.mean_raw.resize(m);
  out.mean_clamped.resize(m);
  out.fallback.assign(m, 0);

  // Position of each unknown item within U, -1 for known items.
  std::vector<Index> slot(n, -1);
  for (std::size_t u = 0; u < m; ++u)
    slot[out.items[u]] = static_cast<Index>(u);

  // Components of U under the nonzero edges; a component is anchored when it
  // touches K through a nonzero edge or the ridge makes it proper.
  std::vector<Index> component(m, -1);
  std::vector<char> anchored;
  std::vector<Index> stack;
  for (std::size_t start = 0; start < m; ++start) {
    if (component[start] >= 0)
      continue;
    const auto c = static_cast<Index>(anchored.size());
    anchored.push_back(model.ridge > 0.0);
    component[start] = c;
    stack.assign(1, static_cast<Index>(start));
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const auto &nb : g.neighbours(out.items[u])) {
        if (model.theta[nb.edge] == 0.0)
          continue;
        const auto v = slot[nb.node];
        if (v < 0) {
          anchored[c] = 1;
        } else if (component[v] < 0) {
          component[v] = c;
          stack.push_back(v);
        }
      }
    }
  }

  // Reduced system over the anchored unknowns.
  std::vector<Index> sub_of(m, -1);
  std::vector<Index> solved;
  for (std::size_t u = 0; u < m; ++u)
    if (anchored[component[u]]) {
      sub_of[u] = static_cast<Index>(solved.size());
      solved.push_back(static_cast<Index>(u));
    }

  std::vector<Edge> sub_edges;
  std::vector<double> sub_theta;  // parallel to sub_edges
  std::vector<double> rhs(solved.size(), 0.0);
  std::vector<double> diag(solved.size(), model.ridge);
  for (std::size_t s = 0; s < solved.size(); ++s) {
    const auto i = out.items[solved[s]];
    for (const auto &nb : g.neighbours(i)) {
      const double w = model.theta[nb.edge];
      diag[s] -= w;
      const auto v = slot[nb.node];
      if (v < 0) {
        rhs[s] -= w * deviation[nb.node];
      } else if (w != 0.0 && i < nb.node) {
        sub_edges.push_back({static_cast<Index>(s), sub_of[v]});
        sub_theta.push_back(w);
      }
    }
  }

  std::vector<double> shift(solved.size(), 0.0);
  std::vector<double> var;
  if (!solved.empty()) {
    // Sub-indices follow item order, so the edges are already canonical and
    // ItemGraph keeps them (and the parallel weights) in place.
    auto sub_graph = std::make_shared<const ItemGraph>(
        solved.size(), g.k(), std::move(sub_edges));
    SparseSymmetric a(sub_graph, std::move(diag), std::move(sub_theta));

    if (options.want_variance) {
      auto bp = gabp(a, rhs, {options.tol, options.max_iters, kDefaultDamping});
      if (!bp.converged)
        throw SolverError("belief propagation did not converge",
                          bp.residual, bp.iterations);
      shift = std::move(bp.mean);
      var = std::move(bp.variance);
    } else {
      shift = solve_spd(a, rhs, options.tol);
    }
  }

  if (options.want_variance)
    out.variance.emplace(m, std::numeric_limits<double>::infinity());
  for (std::size_t u = 0; u < m; ++u) {
    const auto i = out.items[u];
    const auto s = sub_of[u];
    if (s < 0) {
      out.mean_raw[u] = model.means.mu[i];
      out.fallback[u] = 1;
    } else {
      out.mean_raw[u] = model.means.mu[i] + shift[s];
      if (options.want_variance)
        (*out.variance)[u] = var[s];
    }
    out.mean_clamped[u] = clamp_rating(out.mean_raw[u]);
  }
  return out;
}

BlanketPrediction predict_markov_blanket(const ItemFieldModel &model, Index i,
                                         const KnownRatings &neighbour_ratings) {
  const auto &g = *model.graph;
  std::vector<double> rating(model.num_items(),
                             std::numeric_limits<double>::quiet_NaN());
  for (const auto &[item, r] : neighbour_ratings)
    rating[item] = r;

  double precision = model.ridge;
  double pull = 0.0;
  for (const auto &nb : g.neighbours(i)) {
    const double w = model.theta[nb.edge];
    if (std::isnan(rating[nb.node]))
      throw ValidationError("neighbour " + std::to_string(nb.node) + " of item " +
                            std::to_string(i) + " has no rating");
    precision -= w;
    pull += w * (rating[nb.node] - model.means.mu[nb.node]);
  }
  if (precision == 0.0)
    return {model.means.mu[i], std::nullopt};
  return {model.means.mu[i] - pull / precision, 1.0 / precision};
}

}  // namespace itemfield
