#pragma once

#include <stdexcept>
#include <string>

namespace qhm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input is not a metric (or not quasihypermetric where one is required).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A structural identity failed to hold numerically. Indicates an
/// ill-conditioned input or a bug, never a mathematical fact.
class NumericalFault : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a configured enumeration or search budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace qhm
