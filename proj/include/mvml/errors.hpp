#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvml {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input shape (table dimensions, out-of-range indices).
struct StructuralError : Error {
  using Error::Error;
};

/// A connective or operation is missing from the signature in use.
struct SignatureError : Error {
  using Error::Error;
};

/// An operation was called outside its precondition.
struct PreconditionError : Error {
  using Error::Error;
};

/// An enumeration or search would exceed its configured budget.
struct ResourceError : Error {
  using Error::Error;
};

/// A model does not assign a value to a variable/world pair.
struct DomainError : Error {
  using Error::Error;
};

/// Invalid constructor parameter (e.g. a chain with fewer than two elements).
struct ParameterError : Error {
  using Error::Error;
};

/// Lexical or grammatical error in textual input.
class ParseError : public Error {
 public:
  ParseError(std::string const& msg, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mvml
