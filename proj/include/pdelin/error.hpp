/**
 * @file error.hpp
 * @brief Exception hierarchy shared by every pdelin module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace pdelin {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad size, bad order, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Stencil coefficients no longer representable in double precision.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// A dense or enumerated object would exceed the configured budget.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// A vector has a component in the wrong symmetry sector.
class SymmetryViolation : public Error {
 public:
  using Error::Error;
};

/// Right-hand side is not in the range of a singular operator.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

/// No discretization parameters satisfy the requested accuracy.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// The truncation rule is undefined because its log-log argument is <= 1.
class EpsTooLarge : public Error {
 public:
  using Error::Error;
};

/// State-preparation ratio has a vanishing denominator.
class DegenerateRhs : public Error {
 public:
  using Error::Error;
};

/// Coefficient matrix fails the global diagonal dominance test.
class GddRejected : public Error {
 public:
  using Error::Error;
};

/// Point outside the computational domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Direct solve produced a singular factorization or an unacceptable residual.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// Iterative solver stopped at its iteration cap.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace pdelin
