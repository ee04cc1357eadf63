#pragma once

#include <stdexcept>
#include <string>

namespace fibercheck {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (presentation files, PD codes, cache files).
// Carries 1-based line/column when they are known, 0 otherwise.
struct ParseError : Error {
  int line = 0;
  int column = 0;
  ParseError(const std::string& msg, int line_ = 0, int column_ = 0)
      : Error(line_ > 0 ? msg + " (line " + std::to_string(line_) + ", column " +
                              std::to_string(column_) + ")"
                        : msg),
        line(line_),
        column(column_) {}
};

// A documented precondition of an operation was violated by the caller
// (trivial class, wrong deficiency, class not a homomorphism, ...).
struct PreconditionError : Error {
  using Error::Error;
};

// An internal cross-check failed.  This indicates a bug, not bad input.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace fibercheck
