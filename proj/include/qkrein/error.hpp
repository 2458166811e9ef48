#pragma once

#include <stdexcept>
#include <string>

namespace qkrein {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was not met (wrong shape, non-Hermitian input,
/// degenerate space where a nondegenerate one is required).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// An iterative method did not converge, or a numerically required
/// property (stability, definiteness) does not hold.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace qkrein
