//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_MLTRAIN_HPP
#define ITEMFIELD_MLTRAIN_HPP

#include <span>
#include <vector>

#include "itemfield/box_qn.hpp"
#include "itemfield/maxent.hpp"
#include "itemfield/sparsela.hpp"

namespace itemfield {

/// Negative log-likelihood of the moments under the constrained field, as a
/// function of the edge weights alone (the diagonal is substituted), scaled
/// by two and without constants:
///
///   value = sum_E w_ij (2 s_ij - s_ii - s_jj) + ridge sum_i s_ii + log Z
///   grad_ij = (2 s_ij - s_ii - s_jj) - (2 C_ij - C_ii - C_jj)
///
/// where C holds the model's (Bethe or exact) marginal moments and log Z
/// follows the bethe_beliefs_logz convention.
struct MlObjectiveState {
  std::vector<double> theta;
  double value = 0.0;
  std::vector<double> grad;
  GabpResult beliefs;  // variance/edge_cov hold C; log_z as used in value
};

struct BetheOptions {
  double tol = 1e-9;
  std::size_t max_iters = 20000;
  double damping = kDefaultDamping;
};

/// Bethe-approximate objective; beliefs from belief propagation. Throws
/// SolverError carrying the iteration count if propagation does not
/// converge.
MlObjectiveState bethe_nll_grad(std::span<const double> theta,
                                const SparseSymmetric &sigma, double ridge,
                                const BetheOptions &options = {});

/// Same objective with exact moments from a dense factorization.
MlObjectiveState exact_nll_grad(std::span<const double> theta,
                                const SparseSymmetric &sigma, double ridge);

BoxQnOptions qn_options(const TrainConfig &cfg);

/// Minimizes the Bethe objective over theta <= 0 from theta = 0.
BoxQnResult fit_bethe_ml(const SparseSymmetric &sigma, const TrainConfig &cfg,
                         const BetheOptions &options = {});
/// Minimizes the exact objective over theta <= 0 from theta = 0.
BoxQnResult fit_exact_ml(const SparseSymmetric &sigma, const TrainConfig &cfg);

ItemFieldModel train_bethe_ml(const SufficientStats &stats,
                              const TrainConfig &cfg);
ItemFieldModel train_exact_ml(const SufficientStats &stats,
                              const TrainConfig &cfg);

}  // namespace itemfield

#endif  // ITEMFIELD_MLTRAIN_HPP
