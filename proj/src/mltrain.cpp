//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/mltrain.hpp"

#include <algorithm>
#include <cmath>

#include "itemfield/error.hpp"

namespace itemfield {

namespace {
  SparseSymmetric precision_of(std::span<const double> theta,
                               const SparseSymmetric &sigma, double ridge) {
    const auto &edges = sigma.graph().edges();
    if (theta.size() != edges.size())
      throw ValidationError("one weight per edge expected");
    SparseSymmetric p(sigma.graph_ptr());
    std::fill(p.diag().begin(), p.diag().end(), ridge);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      p.offdiag()[e] = theta[e];
      p.diag()[edges[e].i] -= theta[e];
      p.diag()[edges[e].j] -= theta[e];
    }
    return p;
  }

  // Fills value and gradient from the model moments held in state.beliefs.
  void finish(MlObjectiveState &state, const SparseSymmetric &sigma,
              double ridge) {
    const auto &edges = sigma.graph().edges();
    const auto &s = sigma.diag();
    const auto &c = state.beliefs.variance;
    double value = state.beliefs.log_z;
    for (double sii : s)
      value += ridge * sii;
    state.grad.resize(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto [i, j] = edges[e];
      const double empirical = 2.0 * sigma.offdiag()[e] - s[i] - s[j];
      const double model = 2.0 * state.beliefs.edge_cov[e] - c[i] - c[j];
      value += state.theta[e] * empirical;
      state.grad[e] = empirical - model;
    }
    state.value = value;
  }

  void check_inputs(std::span<const double> theta, double ridge) {
    if (!(ridge > 0.0))
      throw ValidationError("likelihood training needs a positive ridge");
    for (double w : theta)
      if (!(w <= 0.0))
        throw ValidationError("edge weights must be non-positive");
  }
}  // namespace

MlObjectiveState bethe_nll_grad(std::span<const double> theta,
                                const SparseSymmetric &sigma, double ridge,
                                const BetheOptions &options) {
  check_inputs(theta, ridge);
  MlObjectiveState state;
  state.theta.assign(theta.begin(), theta.end());
  state.beliefs = bethe_beliefs_logz(precision_of(theta, sigma, ridge),
                                     options.tol, options.max_iters,
                                     options.damping);
  if (!state.beliefs.converged)
    throw SolverError("Bethe beliefs did not converge",
                      state.beliefs.residual, state.beliefs.iterations);
  finish(state, sigma, ridge);
  return state;
}

MlObjectiveState exact_nll_grad(std::span<const double> theta,
                                const SparseSymmetric &sigma, double ridge) {
  check_inputs(theta, ridge);
  MlObjectiveState state;
  state.theta.assign(theta.begin(), theta.end());
  auto dense = dense_marginals(precision_of(theta, sigma, ridge));
  state.beliefs.variance = std::move(dense.cov.diag());
  state.beliefs.edge_cov = std::move(dense.cov.offdiag());
  state.beliefs.log_z = exact_log_z(dense.logdet, sigma.size());
  state.beliefs.converged = true;
  finish(state, sigma, ridge);
  return state;
}

BoxQnOptions qn_options(const TrainConfig &cfg) {
  BoxQnOptions o;
  o.memory = cfg.memory;
  o.max_iters = cfg.iterations;
  o.pgtol = cfg.pgtol;
  o.ftol = cfg.ftol;
  return o;
}

namespace {
  template <class Eval>
  BoxQnResult fit(const SparseSymmetric &sigma, const TrainConfig &cfg,
                  Eval &&eval) {
    cfg.validate();
    const auto m = sigma.graph().num_edges();
    BoxObjective objective = [&](std::span<const double> x,
                                 std::span<double> g) {
      auto state = eval(x);
      std::copy(state.grad.begin(), state.grad.end(), g.begin());
      return state.value;
    };
    auto result = minimize_box(objective, std::vector<double>(m, 0.0),
                               BoxBounds::non_positive(m), qn_options(cfg));
    for (auto &w : result.x)
      w = std::min(w, 0.0);
    return result;
  }
}  // namespace

BoxQnResult fit_bethe_ml(const SparseSymmetric &sigma, const TrainConfig &cfg,
                         const BetheOptions &options) {
  return fit(sigma, cfg, [&](std::span<const double> x) {
    return bethe_nll_grad(x, sigma, cfg.ridge, options);
  });
}

BoxQnResult fit_exact_ml(const SparseSymmetric &sigma, const TrainConfig &cfg) {
  return fit(sigma, cfg, [&](std::span<const double> x) {
    return exact_nll_grad(x, sigma, cfg.ridge);
  });
}

ItemFieldModel train_bethe_ml(const SufficientStats &stats,
                              const TrainConfig &cfg) {
  return make_model(stats, fit_bethe_ml(stats.sigma, cfg).x, cfg.ridge);
}

ItemFieldModel train_exact_ml(const SufficientStats &stats,
                              const TrainConfig &cfg) {
  return make_model(stats, fit_exact_ml(stats.sigma, cfg).x, cfg.ridge);
}

}  // namespace itemfield
