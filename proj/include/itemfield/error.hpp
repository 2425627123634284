//
// Copyright 2026 The ItemField Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef ITEMFIELD_ERROR_HPP
#define ITEMFIELD_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace itemfield {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Input that parses but breaks a domain invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Iterative solver or message passing did not reach its tolerance.
class SolverError : public Error {
public:
  SolverError(const std::string &what, double residual, std::size_t iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

private:
  double residual_;
  std::size_t iterations_;
};

class TrainingError : public Error {
public:
  using Error::Error;
};

/// Persisted model/stats file with a bad header, truncated body or bad values.
class FormatError : public Error {
public:
  using Error::Error;
};

}  // namespace itemfield

#endif  // ITEMFIELD_ERROR_HPP
