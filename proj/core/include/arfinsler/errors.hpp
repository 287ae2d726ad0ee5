#pragma once

#include <stdexcept>
#include <string>

namespace arf {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation that needs a nonzero input receives zero.
class ZeroInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Exponent of a single variable left the packed range.
class ExponentOverflow : public Error {
 public:
  using Error::Error;
};

class KernelMismatch : public Error {
 public:
  using Error::Error;
};

/// The element is a zero divisor of Q(x,y)[t]/(t^m - A): the kernel
/// polynomial is reducible.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// det(g) vanishes identically.
class Degenerate : public Error {
 public:
  using Error::Error;
};

/// Two independent routes to the same object disagree.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class HomogeneityViolation : public Error {
 public:
  using Error::Error;
};

class NormViolation : public Error {
 public:
  using Error::Error;
};

class ParityViolation : public Error {
 public:
  using Error::Error;
};

class ZeroOneForm : public Error {
 public:
  using Error::Error;
};

class ZeroPolynomial : public Error {
 public:
  using Error::Error;
};

/// The object cannot be expressed inside the single-kernel field.
class Unrepresentable : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Wrong shape or symmetry of a tensor-valued parameter.
class ArityError : public Error {
 public:
  using Error::Error;
};

}  // namespace arf
