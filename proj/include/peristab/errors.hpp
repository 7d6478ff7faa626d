#pragma once

#include <stdexcept>
#include <string>

namespace peristab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was not met (dimension mismatch, state
/// outside the validity domain of a formula, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A shape tensor (K or the fourth-order L) is singular or too badly
/// conditioned to invert. Usually a degenerate family (e.g. collinear bonds).
class SingularShapeTensor : public Error {
 public:
  using Error::Error;
};

/// A deformed bond shrank to (numerically) zero length.
class CollapsedBond : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace peristab
