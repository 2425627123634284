//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "itemfield/error.hpp"

namespace itemfield {

MultiplierConvention parse_convention(const std::string &name) {
  if (name == "as-printed" || name == "as_printed")
    return MultiplierConvention::kAsPrinted;
  if (name == "entropy-consistent" || name == "entropy_consistent")
    return MultiplierConvention::kEntropyConsistent;
  throw ValidationError("unknown multiplier convention '" + name + "'");
}

std::string to_string(MultiplierConvention convention) {
  return convention == MultiplierConvention::kAsPrinted ? "as-printed"
                                                        : "entropy-consistent";
}

void TrainConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw ValidationError("step size alpha must be finite and non-negative");
  if (iterations < 1)
    throw ValidationError("iterations must be at least 1");
  if (!(ridge >= 0.0) || !std::isfinite(ridge))
    throw ValidationError("ridge must be finite and non-negative");
}

SparseSymmetric closed_form_theta(const SparseSymmetric &sigma) {
  const auto &edges = sigma.graph().edges();
  const auto &s = sigma.diag();
  SparseSymmetric theta(sigma.graph_ptr());

  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0))
      throw ValidationError("moment diagonal of item " + std::to_string(i) +
                            " is not positive");
    theta.diag()[i] = 1.0 / s[i];
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    const double sij = sigma.offdiag()[e];
    const double det = s[i] * s[j] - sij * sij;
    if (!(det > 0.0))
      throw ValidationError("2x2 minor of edge (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") is not positive");
    theta.offdiag()[e] = -sij / det;
    theta.diag()[i] += s[j] / det - 1.0 / s[i];
    theta.diag()[j] += s[i] / det - 1.0 / s[j];
  }
  return theta;
}

std::vector<double> diagonal_ascent(const SparseSymmetric &sigma,
                                    const TrainConfig &cfg) {
  cfg.validate();
  const auto &edges = sigma.graph().edges();
  const auto n = sigma.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!(sigma.diag()[i] > 0.0))
      throw ValidationError("moment diagonal of item " + std::to_string(i) +
                            " is not positive");

  const double multiplier =
      cfg.convention == MultiplierConvention::kAsPrinted ? 1.0 : 2.0;

  // The substituted constraint keeps C_ij - C_ii - C_jj fixed at its
  // empirical value.
  std::vector<double> offset(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    offset[e] = sigma.offdiag()[e] - sigma.diag()[edges[e].i] -
                sigma.diag()[edges[e].j];

  std::vector<double> c_diag = sigma.diag();
  std::vector<double> c_off = sigma.offdiag();
  std::vector<double> theta_diag(n);
  std::vector<double> theta_off(edges.size());
  std::vector<double> weights(edges.size());

  for (std::size_t k = 1; k <= cfg.iterations; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      theta_diag[i] = 1.0 / c_diag[i];
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto [i, j] = edges[e];
      const double cij = c_off[e];
      const double det = c_diag[i] * c_diag[j] - cij * cij;
      if (det > kDegenerateMinor * c_diag[i] * c_diag[j] && cij > 0.0) {
        theta_off[e] = -cij / det;
        theta_diag[i] += c_diag[j] / det - 1.0 / c_diag[i];
        theta_diag[j] += c_diag[i] / det - 1.0 / c_diag[j];
      } else {
        theta_off[e] = 0.0;
      }
    }

    // Each coordinate's step is divided by a curvature scale: the magnitude
    // of the second derivative of every kept pair term log det b_ij along the
    // constraint direction (C_ii and C_ij move together), plus 1/C_ii^2 for
    // the singleton. Item variances span three orders of magnitude and nearly
    // collinear pairs make some rows far stiffer than others, so no single
    // raw step suits them all; scaled this way alpha is dimensionless.
    const double step = cfg.alpha / std::sqrt(static_cast<double>(k));
    std::vector<double> grad = theta_diag;
    std::vector<double> curv(n);
    for (std::size_t i = 0; i < n; ++i)
      curv[i] = 1.0 / (c_diag[i] * c_diag[i]);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      grad[edges[e].i] += multiplier * theta_off[e];
      grad[edges[e].j] += multiplier * theta_off[e];
      if (theta_off[e] == 0.0)
        continue;
      const auto [i, j] = edges[e];
      const double det = c_diag[i] * c_diag[j] - c_off[e] * c_off[e];
      const double di = c_diag[j] - 2.0 * c_off[e];
      const double dj = c_diag[i] - 2.0 * c_off[e];
      curv[i] += (2.0 * det + di * di) / (det * det);
      curv[j] += (2.0 * det + dj * dj) / (det * det);
    }
    for (std::size_t i = 0; i < n; ++i) {
      c_diag[i] += step * grad[i] / curv[i];
      if (!(c_diag[i] > 0.0) || !std::isfinite(c_diag[i])) {
        std::ostringstream msg;
        msg << "diagonal ascent drove C_" << i << " to " << c_diag[i]
            << " at iteration " << k << " (step " << step << ", gradient "
            << grad[i] << "); reduce alpha";
        throw TrainingError(msg.str());
      }
    }
    for (std::size_t e = 0; e < edges.size(); ++e)
      c_off[e] = offset[e] + c_diag[edges[e].i] + c_diag[edges[e].j];

    for (std::size_t e = 0; e < edges.size(); ++e)
      weights[e] = multiplier * theta_off[e];
    if (cfg.early_stop && cfg.early_stop({k, weights, c_diag, c_off}))
      break;
  }

  for (auto &w : weights)
    w = std::min(w, 0.0);
  return weights;
}

ItemFieldModel make_model(const SufficientStats &stats,
                          std::vector<double> theta, double ridge) {
  ItemFieldModel model{stats.means, stats.item_ids, stats.sigma.graph_ptr(),
                       std::move(theta), ridge};
  model.validate();
  return model;
}

ItemFieldModel train_maxent(const SufficientStats &stats,
                            const TrainConfig &cfg) {
  return make_model(stats, diagonal_ascent(stats.sigma, cfg), cfg.ridge);
}

}  // namespace itemfield
