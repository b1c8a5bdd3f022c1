#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dosc {

// Base of every error raised by the library. The CLI maps subclasses onto
// its exit-code contract (2 = configuration, 3 = numeric).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition on an argument is violated (cutoff < 1, grid too short, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Request exceeds the configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based; 0 when the error is not tied to a line (e.g. empty input).
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Quadrature did not converge, a tail could not be certified, etc.
class NumericError : public Error {
 public:
  using Error::Error;
};

class InsufficientCutoffError : public NumericError {
 public:
  InsufficientCutoffError(const std::string& what, double required)
      : NumericError(what + " (required cutoff " + std::to_string(required) + ")"),
        required_(required) {}

  double required_cutoff() const noexcept { return required_; }

 private:
  double required_;
};

// Main-term pole data does not produce a real value.
class InconsistentPoleData : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace dosc
