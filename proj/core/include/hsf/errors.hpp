#pragma once

#include <stdexcept>
#include <string>

namespace hsf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad dimension, out-of-range
/// parameter, degenerate input that has no meaningful answer).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A memory or sample budget would be exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical method failed to reach its tolerance within the
/// evaluation budget. Carries the best estimate reached so far.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double partial_value,
                   double partial_error)
      : Error(what), partial_value_(partial_value),
        partial_error_(partial_error) {}

  double partial_value() const noexcept { return partial_value_; }
  double partial_error() const noexcept { return partial_error_; }

 private:
  double partial_value_;
  double partial_error_;
};

}  // namespace hsf
