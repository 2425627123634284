//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_BOX_QN_HPP
#define ITEMFIELD_BOX_QN_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "itemfield/error.hpp"

namespace itemfield {

/// Fills the gradient and returns the value. A non-finite value (or a thrown
/// SolverError) marks the point as infeasible; the line search backs off.
using BoxObjective =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

struct BoxBounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static BoxBounds non_positive(std::size_t n);
};

struct BoxQnOptions {
  std::size_t memory = 10;
  std::size_t max_iters = 500;
  double pgtol = 1e-5;   // on the infinity norm of the projected gradient
  double ftol = 1e-10;   // relative decrease below which we stop
  std::size_t max_backtracks = 40;
  double armijo = 1e-4;
};

enum class BoxQnStatus { kProjectedGradient, kRelativeDecrease, kIterationCap };

struct BoxQnResult {
  std::vector<double> x;
  std::vector<double> grad;
  double value = 0.0;
  double projected_gradient = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  BoxQnStatus status = BoxQnStatus::kIterationCap;
  /// Value after every accepted step, starting with the initial point.
  std::vector<double> trace;

  bool converged() const { return status != BoxQnStatus::kIterationCap; }
};

class LineSearchError : public TrainingError {
public:
  LineSearchError(const std::string &what, std::vector<double> last)
      : TrainingError(what), last_iterate_(std::move(last)) {}

  const std::vector<double> &last_iterate() const noexcept {
    return last_iterate_;
  }

private:
  std::vector<double> last_iterate_;
};

/// Projected limited-memory BFGS for simple bounds.
///
/// Variables sitting on a bound with the gradient pushing outward are held
/// fixed for the step; the two-loop recursion runs on the remaining ones.
/// Steps are found by backtracking along the projection arc with an Armijo
/// test, so accepted values decrease monotonically. Curvature pairs with
/// s'y <= 0 are dropped, and a failed quasi-Newton search is retried once
/// along the projected steepest-descent direction before giving up.
BoxQnResult minimize_box(const BoxObjective &f, std::vector<double> x0,
                         const BoxBounds &bounds,
                         const BoxQnOptions &options = {});

}  // namespace itemfield

#endif  // ITEMFIELD_BOX_QN_HPP
