#pragma once

#include <stdexcept>
#include <string>

namespace gqm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes do not agree (vector lengths, matrix orders, grid indices).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A state vector is not unit norm, or a vector that must be nonzero is zero.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// An operator or a derived quantity betrays a non-self-adjoint input
/// (non-Hermitian matrix, complex expectation value, negative variance).
class SelfAdjointnessError : public Error {
 public:
  using Error::Error;
};

/// Tangent vectors that must share a base point do not.
class BaseMismatchError : public Error {
 public:
  using Error::Error;
};

/// A Gram determinant came out negative beyond the positivity tolerance.
class PsdViolationError : public Error {
 public:
  using Error::Error;
};

/// Linear-algebra back end failed (e.g. eigen-decomposition did not converge).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid scalar argument (non-positive tolerance, too-small grid, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace gqm
