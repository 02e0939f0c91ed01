#pragma once

#include <stdexcept>
#include <string>

namespace supercone {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in algebras with different generator counts or shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An index or parameter is outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A result would exceed the dθ-degree or polynomial-degree cutoff.
class TruncationOverflow : public Error {
 public:
  using Error::Error;
};

/// A documented precondition on the input does not hold.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A metric block (η, ω₀, ...) is singular where an inverse is required.
class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

/// The Clifford representation cannot realize the request (odd m).
class UnsupportedRepresentation : public Error {
 public:
  using Error::Error;
};

/// A state or observable has vanishing norm where division by it is needed.
class ZeroNorm : public Error {
 public:
  using Error::Error;
};

/// A two-form expected to be d_T-closed is not.
class NotClosed : public Error {
 public:
  using Error::Error;
};

/// A probability vector lies outside the supersymplectic ellipsoid.
class OutsideCone : public Error {
 public:
  using Error::Error;
};

/// A state function is not normalized where normalization is required.
class Unnormalized : public Error {
 public:
  using Error::Error;
};

/// A time argument lies outside the system's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A JSON document does not match the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace supercone
