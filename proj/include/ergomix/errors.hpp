#pragma once

#include <stdexcept>
#include <string>

namespace ergomix {

/// Operands live on different algebras, or a matrix does not fit the block layout.
class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument violates a documented precondition (non-self-adjoint input,
/// non-stochastic rows, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A random-element request that no element can satisfy.
class InfeasibleRequest : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative or spectral computation failed to reach its residual target.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace ergomix
