#pragma once

#include <stdexcept>
#include <string>

namespace spherewave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// dexpinv evaluated at or beyond its singular radius |Z| = 2π.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// The adaptive integrator could not make progress.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Euler-angle integration reached sin θ ≈ 0.
class GimbalLockError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

/// Computed quantities contradict each other (e.g. a zero frequency in the
/// nonresonant class).
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

/// The root finder was given an interval without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Circle fit on too few or degenerate points.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File could not be written or read.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spherewave
