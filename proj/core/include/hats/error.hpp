#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hats {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document; carries the 1-based line number (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An instance exceeds a configured size bound (brute force, encoding, ...).
class BoundError : public Error {
 public:
  using Error::Error;
};

/// An integer count does not fit the 64-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// External SAT solver failed to run or produced unusable output.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A result failed its own consistency check. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hats
