#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nhspec {

// Base of every error raised by the library. The CLI maps the subclasses to
// exit codes: validation-type errors -> 2, ConvergenceError -> 3, IoError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument: wrong length, out-of-range index, too few points, ...
class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

// Parameters would overflow an exponential (|exponent| > 700).
class ParameterRangeError : public InputError {
 public:
  using InputError::InputError;
};

// Closed forms exist only for the linear potential (order m = 1).
class UnsupportedOrderError : public InputError {
 public:
  using InputError::InputError;
};

// Base energy lies on (or within 1e-9 of) the spectral curve.
class SingularBaseError : public InputError {
 public:
  using InputError::InputError;
};

// Geometry degenerates (parabola collapses to a half-line, ellipse to a
// segment, zero base energy in an edge decomposition).
class DegenerateError : public InputError {
 public:
  using InputError::InputError;
};

// Envelope fit needs at least three maxima (or a zero-free modulus).
class InsufficientStructureError : public InputError {
 public:
  using InputError::InputError;
};

// An internal identity that must hold exactly failed; indicates a wiring bug.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t deflated)
      : Error(what), deflated_(deflated) {}

  // Number of eigenvalues that had deflated when the iteration gave up.
  std::size_t deflated() const noexcept { return deflated_; }

 private:
  std::size_t deflated_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nhspec
