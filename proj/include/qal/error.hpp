#pragma once

#include <stdexcept>
#include <string>

namespace qal {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes (config/usage errors -> 2, everything else -> 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched lengths between states, problems or matrices.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested problem size exceeds a configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failure or other numerical breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Time integration went unstable (negative populations, norm drift).
class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Eigenvector continuation lost track of the followed state.
class ContinuationError : public NumericalError {
 public:
  explicit ContinuationError(const std::string& what, double at_s)
      : NumericalError(what), s_(at_s) {}
  double s() const noexcept { return s_; }

 private:
  double s_;
};

/// Not enough usable points for a least-squares fit.
class FitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Precondition of an operation violated by its caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (solver config, experiment files, CLI options).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qal
