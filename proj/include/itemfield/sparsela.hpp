//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_SPARSELA_HPP
#define ITEMFIELD_SPARSELA_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "itemfield/itemgraph.hpp"

namespace itemfield {

inline constexpr double kSolveTol = 1e-8;
inline constexpr double kBeliefTol = 1e-6;
inline constexpr std::size_t kMaxBpIters = 1000;
inline constexpr double kDefaultDamping = 0.5;
inline constexpr std::size_t kDenseCap = 5000;

/// Jacobi-preconditioned conjugate gradients. Stops when
/// ||Ax - b|| <= tol ||b||; throws SolverError after 10 n iterations.
std::vector<double> solve_spd(const SparseSymmetric &a,
                              std::span<const double> b,
                              double tol = kSolveTol);

struct GabpOptions {
  double tol = kSolveTol;
  std::size_t max_iters = kMaxBpIters;
  /// Weight kept from the previous message; 0 is undamped.
  double damping = kDefaultDamping;
};

/// Marginals of the Gaussian p(x) ~ exp(-x'Ax/2 + b'x) as computed by
/// Gaussian belief propagation.
///
/// `mean` solves Ax = b at the fixed point. `variance` and `edge_cov` are the
/// singleton and pairwise belief covariances; they are exact on trees and
/// the Bethe approximation otherwise.
struct GabpResult {
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> edge_cov;
  bool converged = false;
  std::size_t iterations = 0;
  double residual = 0.0;  // max message change in the last sweep pair
  double log_z = 0.0;     // only set by bethe_beliefs_logz

  /// Belief moments as a matrix on the pattern of `graph`.
  SparseSymmetric beliefs(GraphPtr graph) const;
};

/// One iteration is a forward sweep over the edges in canonical order
/// followed by a backward sweep, each edge sending both of its messages.
/// Non-convergence is reported through the flag, never thrown.
GabpResult gabp(const SparseSymmetric &a, std::span<const double> b,
                const GabpOptions &options = {});

/// Bethe beliefs and log-partition of the zero-mean Gaussian with
/// precision theta.
///
/// Conventions: <A, C> counts each off-diagonal pattern entry twice, the
/// Bethe entropy is
///   H(C) = sum_E log(C_ii C_jj - C_ij^2) + sum_i (1 - deg i) log C_ii,
/// and log Z = -(<theta, C> - H(C)) at the converged beliefs. On trees this
/// equals -n - log det theta, so d logZ / d theta_ii = -C_ii and the
/// symmetric derivative with respect to an edge is -2 C_ij. All 2 pi terms
/// are dropped.
GabpResult bethe_beliefs_logz(const SparseSymmetric &theta,
                              double tol = kBeliefTol,
                              std::size_t max_iters = kMaxBpIters,
                              double damping = kDefaultDamping);

/// Log-determinant by dense Cholesky. Throws SolverError if the matrix is
/// not positive definite and ValidationError above kDenseCap items.
double dense_logdet(const SparseSymmetric &theta);

/// Log-determinant and the entries of theta^-1 on theta's own pattern.
struct DenseMarginals {
  double logdet = 0.0;
  SparseSymmetric cov;
};

DenseMarginals dense_marginals(const SparseSymmetric &theta);

/// log Z under the bethe_beliefs_logz convention, computed exactly.
inline double exact_log_z(double logdet, std::size_t n) {
  return -static_cast<double>(n) - logdet;
}

}  // namespace itemfield

#endif  // ITEMFIELD_SPARSELA_HPP
