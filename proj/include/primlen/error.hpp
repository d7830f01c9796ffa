#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace primlen {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different fields, arities or generator sets.
class Mismatch : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class SingularMatrix : public Error {
 public:
  SingularMatrix() : Error("matrix is singular") {}
};

/// A precondition of an operation is violated (bad index, duplicate node, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The input is well formed but outside what the algorithms cover
/// (positive characteristic for polynomials, rank < 3 for Lie elements).
class Unsupported : public Error {
 public:
  using Error::Error;
};

class DegreeCapExceeded : public Error {
 public:
  using Error::Error;
};

/// Syntax error; `position` is the 0-based byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace primlen
