//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "itemfield/box_qn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace itemfield {

BoxBounds BoxBounds::non_positive(std::size_t n) {
  return {std::vector<double>(n, -std::numeric_limits<double>::infinity()),
          std::vector<double>(n, 0.0)};
}

namespace {
  struct CurvaturePair {
    std::vector<double> s;
    std::vector<double> y;
  };

  class Problem {
  public:
    Problem(const BoxObjective &f, const BoxBounds &bounds)
        : f_(f), bounds_(bounds) {}

    double project(std::size_t i, double v) const {
      return std::clamp(v, bounds_.lower[i], bounds_.upper[i]);
    }

    double eval(std::span<const double> x, std::span<double> g) {
      ++evaluations;
      try {
        const double v = f_(x, g);
        if (!std::isfinite(v))
          return std::numeric_limits<double>::infinity();
        for (double gi : g)
          if (!std::isfinite(gi))
            return std::numeric_limits<double>::infinity();
        return v;
      } catch (const SolverError &) {
        return std::numeric_limits<double>::infinity();
      }
    }

    std::size_t evaluations = 0;

  private:
    const BoxObjective &f_;
    const BoxBounds &bounds_;
  };

  double masked_dot(const std::vector<double> &a, const std::vector<double> &b,
                    const std::vector<char> &free) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (free[i])
        s += a[i] * b[i];
    return s;
  }

  std::vector<double> two_loop(const std::deque<CurvaturePair> &pairs,
                               const std::vector<double> &g,
                               const std::vector<char> &free) {
    std::vector<double> q(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (free[i])
        q[i] = g[i];

    std::vector<double> alpha(pairs.size(), 0.0);
    std::vector<double> rho(pairs.size(), 0.0);
    for (std::size_t k = pairs.size(); k-- > 0;) {
      const double sy = masked_dot(pairs[k].s, pairs[k].y, free);
      if (sy <= 0.0)
        continue;
      rho[k] = 1.0 / sy;
      alpha[k] = rho[k] * masked_dot(pairs[k].s, q, free);
      for (std::size_t i = 0; i < q.size(); ++i)
        if (free[i])
          q[i] -= alpha[k] * pairs[k].y[i];
    }

    double gamma = 1.0;
    if (!pairs.empty()) {
      const auto &last = pairs.back();
      const double sy = masked_dot(last.s, last.y, free);
      const double yy = masked_dot(last.y, last.y, free);
      if (sy > 0.0 && yy > 0.0)
        gamma = sy / yy;
    }
    for (auto &v : q)
      v *= gamma;

    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (rho[k] == 0.0)
        continue;
      const double beta = rho[k] * masked_dot(pairs[k].y, q, free);
      for (std::size_t i = 0; i < q.size(); ++i)
        if (free[i])
          q[i] += (alpha[k] - beta) * pairs[k].s[i];
    }
    for (auto &v : q)
      v = -v;
    return q;
  }
}  // namespace

BoxQnResult minimize_box(const BoxObjective &f, std::vector<double> x0,
                         const BoxBounds &bounds, const BoxQnOptions &options) {
  const auto n = x0.size();
  if (bounds.lower.size() != n || bounds.upper.size() != n)
    throw ValidationError("bounds do not match the number of variables");

  Problem problem(f, bounds);
  BoxQnResult r;
  r.x = std::move(x0);
  for (std::size_t i = 0; i < n; ++i)
    r.x[i] = problem.project(i, r.x[i]);
  r.grad.assign(n, 0.0);
  r.value = problem.eval(r.x, r.grad);
  if (!std::isfinite(r.value))
    throw TrainingError("objective is not finite at the starting point");
  r.trace.push_back(r.value);

  std::deque<CurvaturePair> pairs;
  std::vector<char> free(n);
  std::vector<double> xt(n), gt(n);

  for (r.iterations = 0; r.iterations < options.max_iters; ++r.iterations) {
    r.projected_gradient = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      r.projected_gradient =
          std::max(r.projected_gradient,
                   std::abs(problem.project(i, r.x[i] - r.grad[i]) - r.x[i]));
    if (r.projected_gradient < options.pgtol) {
      r.status = BoxQnStatus::kProjectedGradient;
      break;
    }

    for (std::size_t i = 0; i < n; ++i) {
      const bool at_lower = r.x[i] <= bounds.lower[i] && r.grad[i] > 0.0;
      const bool at_upper = r.x[i] >= bounds.upper[i] && r.grad[i] < 0.0;
      free[i] = !(at_lower || at_upper);
    }

    double ft = 0.0;
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      std::vector<double> d;
      if (attempt == 0 && !pairs.empty()) {
        d = two_loop(pairs, r.grad, free);
        if (masked_dot(d, r.grad, free) >= 0.0)
          continue;
      } else {
        d.assign(n, 0.0);
        double gmax = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          if (free[i])
            gmax = std::max(gmax, std::abs(r.grad[i]));
        // Unit-length first step when there is no curvature information.
        const double scale = pairs.empty() && gmax > 0.0 ? 1.0 / gmax : 1.0;
        for (std::size_t i = 0; i < n; ++i)
          if (free[i])
            d[i] = -scale * r.grad[i];
      }

      double t = 1.0;
      for (std::size_t b = 0; b <= options.max_backtracks; ++b, t *= 0.5) {
        double decrease = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          xt[i] = problem.project(i, r.x[i] + t * d[i]);
          decrease += r.grad[i] * (xt[i] - r.x[i]);
        }
        ft = problem.eval(xt, gt);
        if (std::isfinite(ft) && ft <= r.value + options.armijo * decrease) {
          accepted = true;
          break;
        }
      }
      if (!accepted)
        pairs.clear();
    }
    if (!accepted)
      throw LineSearchError("line search failed at iteration " +
                                std::to_string(r.iterations),
                            r.x);

    CurvaturePair pair{std::vector<double>(n), std::vector<double>(n)};
    double sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = xt[i] - r.x[i];
      pair.y[i] = gt[i] - r.grad[i];
      sy += pair.s[i] * pair.y[i];
    }
    if (sy > 0.0) {
      pairs.push_back(std::move(pair));
      if (pairs.size() > options.memory)
        pairs.pop_front();
    }

    const double prev = r.value;
    r.x.swap(xt);
    r.grad.swap(gt);
    r.value = ft;
    r.trace.push_back(ft);
    if (prev - ft <= options.ftol * std::max({std::abs(prev), std::abs(ft), 1.0})) {
      ++r.iterations;
      r.status = BoxQnStatus::kRelativeDecrease;
      break;
    }
  }
  r.evaluations = problem.evaluations;
  return r;
}

}  // namespace itemfield
