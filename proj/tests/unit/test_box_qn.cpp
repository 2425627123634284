//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "itemfield/box_qn.hpp"

using namespace itemfield;

TEST_CASE("unconstrained quadratic") {
  // f = sum_i c_i (x_i - t_i)^2 with widely spread curvatures.
  const std::vector<double> c{1.0, 10.0, 100.0, 0.1};
  const std::vector<double> t{-1.0, -2.0, -0.5, -3.0};
  BoxObjective f = [&](std::span<const double> x, std::span<double> g) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      v += c[i] * (x[i] - t[i]) * (x[i] - t[i]);
      g[i] = 2.0 * c[i] * (x[i] - t[i]);
    }
    return v;
  };
  BoxQnOptions opt;
  opt.ftol = 0.0;
  auto r = minimize_box(f, std::vector<double>(4, 0.0), BoxBounds::non_positive(4), opt);
  CHECK(r.status == BoxQnStatus::kProjectedGradient);
  CHECK(r.converged());
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(r.x[i] == doctest::Approx(t[i]).epsilon(1e-5));
}

TEST_CASE("active bounds") {
  // Minimum of (x0 - 1)^2 + (x1 + 1)^2 over x <= 0 is (0, -1).
  BoxObjective f = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2.0 * (x[0] - 1.0);
    g[1] = 2.0 * (x[1] + 1.0);
    return (x[0] - 1.0) * (x[0] - 1.0) + (x[1] + 1.0) * (x[1] + 1.0);
  };
  auto r = minimize_box(f, {-5.0, 3.0}, BoxBounds::non_positive(2));
  CHECK(r.converged());
  CHECK(r.x[0] == 0.0);
  CHECK(r.x[1] == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("property: accepted steps never increase the objective") {
  // Rosenbrock in the negative orthant around (-1, 1) mirrored: minimum of
  // 100 (y - x^2)^2 + (1 + x)^2 at (-1, 1), bounded by x, y <= 0 so the
  // constrained minimum sits on y = 0.
  BoxObjective f = [](std::span<const double> x, std::span<double> g) {
    const double a = x[1] - x[0] * x[0];
    const double b = 1.0 + x[0];
    g[0] = -400.0 * a * x[0] + 2.0 * b;
    g[1] = 200.0 * a;
    return 100.0 * a * a + b * b;
  };
  BoxQnOptions opt;
  opt.max_iters = 200;
  auto r = minimize_box(f, {-2.0, -1.0}, BoxBounds::non_positive(2), opt);
  for (std::size_t k = 1; k < r.trace.size(); ++k)
    CHECK(r.trace[k] <= r.trace[k - 1]);
  CHECK(r.x[1] <= 0.0);
  CHECK(r.value < r.trace.front());
}

TEST_CASE("non-finite trial points are backtracked over") {
  // log barrier: only x > -1 is finite.
  BoxObjective f = [](std::span<const double> x, std::span<double> g) {
    if (x[0] <= -1.0)
      return std::numeric_limits<double>::infinity();
    g[0] = 1.0 - 1.0 / (x[0] + 1.0) * 0.5;
    return x[0] - 0.5 * std::log(x[0] + 1.0);
  };
  auto r = minimize_box(f, {0.0}, BoxBounds::non_positive(1));
  CHECK(r.converged());
  CHECK(r.x[0] == doctest::Approx(-0.5).epsilon(1e-5));
}

TEST_CASE("iteration cap and line-search failure") {
  BoxObjective slow = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2.0 * (x[0] + 1e6);
    return (x[0] + 1e6) * (x[0] + 1e6);
  };
  BoxQnOptions opt;
  opt.max_iters = 1;
  opt.ftol = 0.0;
  auto r = minimize_box(slow, {0.0}, BoxBounds::non_positive(1), opt);
  CHECK(r.status == BoxQnStatus::kIterationCap);
  CHECK_FALSE(r.converged());

  // A gradient pointing the wrong way admits no decrease.
  BoxObjective wrong = [](std::span<const double> x, std::span<double> g) {
    g[0] = 1.0;
    return -x[0];
  };
  try {
    minimize_box(wrong, {-1.0}, BoxBounds::non_positive(1));
    FAIL("expected a line-search failure");
  } catch (const LineSearchError &e) {
    REQUIRE(e.last_iterate().size() == 1);
    CHECK(e.last_iterate()[0] == -1.0);
  }

  BoxObjective bad_start = [](std::span<const double>, std::span<double>) {
    return std::nan("");
  };
  CHECK_THROWS_AS(minimize_box(bad_start, {0.0}, BoxBounds::non_positive(1)),
                  TrainingError);
  CHECK_THROWS_AS(minimize_box(slow, {0.0, 0.0}, BoxBounds::non_positive(1)),
                  ValidationError);
}
