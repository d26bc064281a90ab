#pragma once

#include <stdexcept>
#include <string>

namespace isosurf {

/// Base of all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: unknown label, malformed chart file, violated precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The numerics could not produce a trustworthy answer.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Chart formula not smooth (or not defined) at the requested point.
class EvaluationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// First fundamental form not positive definite.
class DegenerateMetricError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Osculating flag inconsistent with a minimal surface (a normal space of
/// rank above two).
class InconsistentInputError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Point-wise isotropy or minimality precondition failed.
class PreconditionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Frame field jumps between neighbouring samples.
class GaugeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Connection tables fail the integrability (Gauss-Codazzi-Ricci) check.
class CompatibilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace isosurf
