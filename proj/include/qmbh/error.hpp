#pragma once

#include <stdexcept>
#include <string>

namespace qmbh {

/// Base class for every error raised by the workbench.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation's precondition was violated by its inputs.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Compton-scale quantities are undefined for a massless particle.
class MasslessParticleError : public PreconditionError {
 public:
  explicit MasslessParticleError(const std::string& name)
      : PreconditionError("particle '" + name + "' is massless; no Compton scale") {}
};

/// A circulation loop passes through a masked (nodal) grid point.
class NodeCrossingError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A metric perturbation is too large for the linearized treatment.
class LinearizationDomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A metric function vanishes (Delta = 0 or rho^2 = 0) at the requested point.
class SingularPointError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Input data contains NaN or Inf.
class NonFiniteError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Configuration or file-format problems.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmbh
