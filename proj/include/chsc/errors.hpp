#pragma once

#include <stdexcept>
#include <string>

namespace chsc {

/// Raised when a configuration file is malformed or violates the schema.
/// Messages are path-qualified, e.g. "cost.kappa: must be > 0".
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Newton failed to reach the residual tolerance within the iteration budget.
struct NewtonDivergence : std::runtime_error {
  explicit NewtonDivergence(const std::string& what) : std::runtime_error(what) {}
};

/// The phase fraction left the safeguard band more often than the configured
/// clamp budget allows.
struct SeparationBreach : std::runtime_error {
  explicit SeparationBreach(const std::string& what) : std::runtime_error(what) {}
};

/// Backtracking reduced the proximal step below the configured minimum.
struct StepCollapse : std::runtime_error {
  explicit StepCollapse(const std::string& what) : std::runtime_error(what) {}
};

/// An inner linear solve (direct or Krylov) failed to converge.
struct LinearSolveFailure : std::runtime_error {
  explicit LinearSolveFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chsc
