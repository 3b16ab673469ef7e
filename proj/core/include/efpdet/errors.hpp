#pragma once

#include <stdexcept>
#include <string>

namespace efpdet {

/// Argument outside the admissible domain of an operation (bad angle, node count, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Evaluation at a point where a kernel or function is singular (z = 1, branch points, C itself).
class SingularPointError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Result would overflow or an integrand does not decay.
class RangeError : public std::range_error {
public:
  using std::range_error::range_error;
};

/// Numerical breakdown: exactly singular matrix, untrusted pivots.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace efpdet
