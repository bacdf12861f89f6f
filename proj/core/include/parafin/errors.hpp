#pragma once

#include <stdexcept>
#include <string>

namespace parafin {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operands carry different ring tags (or a scalar does not embed in the requested ring).
struct TagMismatchError : Error {
  explicit TagMismatchError(const std::string& msg) : Error(msg) {}
};

/// Division by zero in exact arithmetic.
struct DivisionByZeroError : Error {
  explicit DivisionByZeroError(const std::string& msg) : Error(msg) {}
};

/// Shape or ambient-dimension mismatch between operands.
struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// A sesquilinear structure violates its declared contract (singular gram, broken kind symmetry).
struct FormError : Error {
  explicit FormError(const std::string& msg) : Error(msg) {}
};

/// Flag members fail to form a chain, or a couple is structurally mismatched.
struct NotAChainError : Error {
  explicit NotAChainError(const std::string& msg) : Error(msg) {}
};

/// Operation invoked on a subalgebra whose shape it does not support.
struct UnsupportedShapeError : Error {
  explicit UnsupportedShapeError(const std::string& msg) : Error(msg) {}
};

/// A set of matrices expected to be bracket-closed is not, or ambients disagree.
struct AlgebraError : Error {
  explicit AlgebraError(const std::string& msg) : Error(msg) {}
};

/// A flag or subspace is not stable under the conjugation it is being pushed through.
struct StabilityError : Error {
  explicit StabilityError(const std::string& msg) : Error(msg) {}
};

/// Parse failure in one of the text grammars (scalars, real-form specs, tail patterns, configs).
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// A documented precondition of an operation does not hold for the inputs.
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

/// A limit question whose stationarity proof did not close by the requested horizon.
struct UndecidableAtHorizonError : Error {
  explicit UndecidableAtHorizonError(const std::string& msg) : Error(msg) {}
};

/// Per-level data of a direct system fails to nest under the corner embeddings.
struct CoherenceError : Error {
  explicit CoherenceError(const std::string& msg) : Error(msg) {}
};

/// Two routes that must agree disagreed.  Callers treat this as fatal (CLI exit code 2).
struct InternalConsistencyError : Error {
  explicit InternalConsistencyError(const std::string& msg) : Error(msg) {}
};

}  // namespace parafin
