#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ginikit {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside their admissible range, or an argument outside the
/// domain where a formula is valid (e.g. the NB series outside its radius).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested operation has no meaning for this distribution family.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure produced an unusable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Iterative refinement stopped before reaching its tolerance.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double last_estimate, double last_error)
      : NumericalError(what), last_estimate_(last_estimate), last_error_(last_error) {}

  double last_estimate() const noexcept { return last_estimate_; }
  double last_error() const noexcept { return last_error_; }

 private:
  double last_estimate_;
  double last_error_;
};

/// Malformed or unreadable sample data. `line()` is 0 when not line specific.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ginikit
