#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace halfspace {

/// Input lies outside the mathematical domain of an operation (focal point,
/// branch point, parameters outside an admissible regime).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation declined to run because a geometric hypothesis failed
/// (e.g. orientation of the comparison surface).
class RefusedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of its subdivision budget. Carries the best
/// estimate it had and the error bound achieved so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, std::complex<double> estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  std::complex<double> estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  std::complex<double> estimate_;
  double error_bound_;
};

}  // namespace halfspace
