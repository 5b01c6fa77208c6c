#pragma once

#include <stdexcept>
#include <string>

namespace archsmell {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when known.
struct ParseError : Error {
  explicit ParseError(const std::string& msg, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_number(line) {}
  long line_number = 0;
};

/// Structurally invalid data (dangling ids, bad distributions, ...).
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace archsmell
