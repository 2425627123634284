//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/sparsela.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "itemfield/error.hpp"

namespace itemfield {

namespace {
  double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      s += a[i] * b[i];
    return s;
  }
}  // namespace

std::vector<double> solve_spd(const SparseSymmetric &a,
                              std::span<const double> b, double tol) {
  const auto n = a.size();
  if (b.size() != n)
    throw ValidationError("solve_spd: dimension mismatch");

  std::vector<double> x(n, 0.0);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0)
    return x;

  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(a.diag()[i] > 0.0))
      throw SolverError("solve_spd: non-positive diagonal entry " +
                            std::to_string(i),
                        1.0, 0);
    inv_diag[i] = 1.0 / a.diag()[i];
  }

  std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  double rnorm = bnorm;

  const std::size_t cap = std::max<std::size_t>(10 * n, 10);
  for (std::size_t it = 0; it < cap; ++it) {
    a.multiply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0))
      throw SolverError("solve_spd: matrix is not positive definite",
                        rnorm / bnorm, it);
    const double step = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step * p[i];
      r[i] -= step * q[i];
    }
    rnorm = std::sqrt(dot(r, r));
    if (rnorm <= tol * bnorm)
      return x;
    for (std::size_t i = 0; i < n; ++i)
      z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
  }
  throw SolverError("solve_spd: no convergence within " + std::to_string(cap) +
                        " iterations",
                    rnorm / bnorm, cap);
}

SparseSymmetric GabpResult::beliefs(GraphPtr graph) const {
  return SparseSymmetric(std::move(graph), variance, edge_cov);
}

namespace {
  // Messages live on directed edges: slot 2e carries i -> j (into j), slot
  // 2e+1 carries j -> i (into i), for edge e = (i, j).
  class MessagePassing {
  public:
    MessagePassing(const SparseSymmetric &a, std::span<const double> b,
                   double damping)
        : a_(a), b_(b), keep_(damping), msg_prec_(2 * a.graph().num_edges()),
          msg_shift_(2 * a.graph().num_edges()), node_prec_(a.size()),
          node_shift_(a.size()) {}

    // Returns false if a cavity precision went non-positive.
    bool iterate(double &residual) {
      aggregate();
      residual = 0.0;
      const auto m = static_cast<std::ptrdiff_t>(a_.graph().num_edges());
      for (std::ptrdiff_t e = 0; e < m; ++e)
        if (!update_edge(e, residual))
          return false;
      for (std::ptrdiff_t e = m - 1; e >= 0; --e)
        if (!update_edge(e, residual))
          return false;
      return true;
    }

    GabpResult marginals() {
      aggregate();
      const auto &edges = a_.graph().edges();
      GabpResult r;
      r.mean.resize(a_.size());
      r.variance.resize(a_.size());
      r.edge_cov.resize(edges.size());
      for (std::size_t i = 0; i < a_.size(); ++i) {
        r.variance[i] = 1.0 / node_prec_[i];
        r.mean[i] = node_shift_[i] / node_prec_[i];
      }
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const double aij = a_.offdiag()[e];
        const double ci = node_prec_[edges[e].i] - msg_prec_[2 * e + 1];
        const double cj = node_prec_[edges[e].j] - msg_prec_[2 * e];
        r.edge_cov[e] = -aij / (ci * cj - aij * aij);
      }
      return r;
    }

  private:
    void aggregate() {
      for (std::size_t i = 0; i < a_.size(); ++i) {
        node_prec_[i] = a_.diag()[i];
        node_shift_[i] = b_.empty() ? 0.0 : b_[i];
      }
      const auto &edges = a_.graph().edges();
      for (std::size_t e = 0; e < edges.size(); ++e) {
        node_prec_[edges[e].j] += msg_prec_[2 * e];
        node_shift_[edges[e].j] += msg_shift_[2 * e];
        node_prec_[edges[e].i] += msg_prec_[2 * e + 1];
        node_shift_[edges[e].i] += msg_shift_[2 * e + 1];
      }
    }

    bool update_edge(std::ptrdiff_t e, double &residual) {
      const auto [i, j] = a_.graph().edges()[e];
      return send(i, j, 2 * e, 2 * e + 1, a_.offdiag()[e], residual) &&
             send(j, i, 2 * e + 1, 2 * e, a_.offdiag()[e], residual);
    }

    bool send(Index from, Index to, std::size_t out, std::size_t back,
              double aij, double &residual) {
      const double cavity_prec = node_prec_[from] - msg_prec_[back];
      const double cavity_shift = node_shift_[from] - msg_shift_[back];
      if (!(cavity_prec > 0.0) || !std::isfinite(cavity_prec))
        return false;
      const double prec = -aij * aij / cavity_prec;
      const double shift = -aij * cavity_shift / cavity_prec;
      residual = std::max({residual, std::abs(prec - msg_prec_[out]),
                           std::abs(shift - msg_shift_[out])});
      const double dp = (1.0 - keep_) * (prec - msg_prec_[out]);
      const double ds = (1.0 - keep_) * (shift - msg_shift_[out]);
      msg_prec_[out] += dp;
      msg_shift_[out] += ds;
      node_prec_[to] += dp;
      node_shift_[to] += ds;
      return true;
    }

    const SparseSymmetric &a_;
    std::span<const double> b_;
    double keep_;
    std::vector<double> msg_prec_;
    std::vector<double> msg_shift_;
    std::vector<double> node_prec_;
    std::vector<double> node_shift_;
  };
}  // namespace

GabpResult gabp(const SparseSymmetric &a, std::span<const double> b,
                const GabpOptions &options) {
  if (!b.empty() && b.size() != a.size())
    throw ValidationError("gabp: dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a.diag()[i] > 0.0))
      throw ValidationError("gabp: diagonal entry " + std::to_string(i) +
                            " is not positive");
  if (!(options.damping >= 0.0 && options.damping < 1.0))
    throw ValidationError("gabp: damping must lie in [0,1)");

  MessagePassing bp(a, b, options.damping);
  double residual = 0.0;
  std::size_t it = 0;
  bool ok = true;
  while (it < options.max_iters) {
    ++it;
    ok = bp.iterate(residual);
    if (!ok || residual < options.tol)
      break;
  }

  GabpResult r = bp.marginals();
  r.iterations = it;
  r.residual = ok ? residual : std::numeric_limits<double>::infinity();
  r.converged = ok && residual < options.tol;
  if (r.converged)
    r.converged = std::all_of(r.variance.begin(), r.variance.end(),
                              [](double v) { return v > 0.0; });
  return r;
}

GabpResult bethe_beliefs_logz(const SparseSymmetric &theta, double tol,
                              std::size_t max_iters, double damping) {
  GabpResult r = gabp(theta, {}, {tol, max_iters, damping});

  const auto &g = theta.graph();
  const auto &edges = g.edges();
  double energy = 0.0;
  double entropy = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double c = r.variance[i];
    energy += theta.diag()[i] * c;
    entropy += (1.0 - static_cast<double>(g.degree(static_cast<Index>(i)))) *
               std::log(c);
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double ci = r.variance[edges[e].i];
    const double cj = r.variance[edges[e].j];
    const double cij = r.edge_cov[e];
    energy += 2.0 * theta.offdiag()[e] * cij;
    entropy += std::log(ci * cj - cij * cij);
  }
  r.log_z = -(energy - entropy);
  if (!std::isfinite(r.log_z))
    r.converged = false;
  return r;
}

namespace {
  Eigen::LLT<Eigen::MatrixXd> dense_cholesky(const SparseSymmetric &theta) {
    const auto n = theta.size();
    if (n > kDenseCap)
      throw ValidationError("dense path limited to " +
                            std::to_string(kDenseCap) + " items");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
      a(i, i) = theta.diag()[i];
    const auto &edges = theta.graph().edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      a(edges[e].i, edges[e].j) = theta.offdiag()[e];
      a(edges[e].j, edges[e].i) = theta.offdiag()[e];
    }
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
      throw SolverError("dense Cholesky failed: matrix is not positive definite",
                        0.0, 0);
    return llt;
  }

  double logdet_from(const Eigen::LLT<Eigen::MatrixXd> &llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  }
}  // namespace

double dense_logdet(const SparseSymmetric &theta) {
  return logdet_from(dense_cholesky(theta));
}

DenseMarginals dense_marginals(const SparseSymmetric &theta) {
  const auto llt = dense_cholesky(theta);
  const auto n = static_cast<Eigen::Index>(theta.size());

  // theta^-1 = L^-T L^-1, so entry (i, j) is the dot product of columns i
  // and j of L^-1.
  Eigen::MatrixXd linv = Eigen::MatrixXd::Identity(n, n);
  llt.matrixL().solveInPlace(linv);

  DenseMarginals out{logdet_from(llt), SparseSymmetric(theta.graph_ptr())};
  for (Eigen::Index i = 0; i < n; ++i)
    out.cov.diag()[i] = linv.col(i).tail(n - i).squaredNorm();
  const auto &edges = theta.graph().edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Eigen::Index j = edges[e].j;  // i < j: rows above j are zero
    out.cov.offdiag()[e] =
        linv.col(edges[e].i).tail(n - j).dot(linv.col(j).tail(n - j));
  }
  return out;
}

}  // namespace itemfield
