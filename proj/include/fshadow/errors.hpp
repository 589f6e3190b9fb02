#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fshadow {

/// Malformed Majorana index sequence (duplicates, out of range, not increasing).
class InvalidSequence : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by dense or enumerative routines asked to exceed their mode guard.
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Requested inverse does not exist (zero channel eigenvalue, etc).
class NotInvertible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input data that cannot be parsed. Carries the 1-based line number when known (0 otherwise).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Numerical consistency check failed (probabilities out of range, imaginary residue, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_guard(int m, int max_m, const char* what) {
  if (m > max_m)
    throw GuardError(std::string(what) + ": m=" + std::to_string(m) + " exceeds limit " +
                     std::to_string(max_m));
}

}  // namespace fshadow
