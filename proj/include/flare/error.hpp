#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flare {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

/// Distance requested between vectors with different target attributes.
class MismatchedTarget : public Error {
 public:
  using Error::Error;
};

/// Distance from a vector with no non-⋆ premise cell.
class UndefinedDistance : public Error {
 public:
  using Error::Error;
};

class TargetUnasserted : public Error {
 public:
  using Error::Error;
};

/// Dropping the last remaining premise condition of a vector.
class WouldCoverEverything : public Error {
 public:
  using Error::Error;
};

/// An asserted cell was about to be overwritten during a query.
class NonMonotonicAssertion : public Error {
 public:
  using Error::Error;
};

/// Forward chaining ran more iterations than it can possibly need.
class IterationBoundExceeded : public Error {
 public:
  using Error::Error;
};

/// A vector or rule violated the data model invariants.
class InvalidVector : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column = 0)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    std::string out;
    if (line > 0) {
      out += "line " + std::to_string(line);
      if (column > 0) out += ", column " + std::to_string(column);
      out += ": ";
    }
    return out + message;
  }

  std::size_t line_;
  std::size_t column_;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnsupportedClause : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Same predicate used both as p(x) and p(x, C).
class InconsistentArity : public Error {
 public:
  using Error::Error;
};

}  // namespace flare
