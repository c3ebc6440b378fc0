#pragma once

#include <stdexcept>
#include <string>

namespace kgrs {

// Bad input data or parameters: caller mistake, not a solver breakdown.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Solver breakdown: quadrature non-convergence, step-size disagreement,
// domain collapse inside an integration range.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A computed quantity violated a requested tolerance.
class VerificationError : public std::runtime_error {
 public:
  explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kgrs
