#pragma once

#include <cstdint>

#include "chsc/fields.hpp"
#include "chsc/model.hpp"

namespace chsc {

enum class NewtonGuess { Previous, Extrapolated };

/// Knobs of the implicit-Euler / Newton forward solver and of the inner
/// linear solves shared by the sensitivity systems.
struct SolverOptions {
  scalar_t newton_tol = 1e-10;  ///< absolute max-norm tolerance on the step residual
  int newton_max_iters = 50;
  int max_halvings = 30;        ///< damping: step halvings allowed per iteration
  NewtonGuess guess = NewtonGuess::Previous;
  std::int64_t clamp_budget = 1000000;  ///< SeparationBreach beyond this many clamps
  scalar_t krylov_tol = 1e-12;  ///< relative tolerance of the 2D inner solver
};

struct StateSolveStats {
  int total_newton_iters = 0;
  int max_step_iters = 0;
  scalar_t max_final_residual = 0.0;  ///< worst accepted step residual (max-norm)
  std::int64_t clamp_count = 0;
  bool control_bounds_warning = false;
};

struct StateSolveResult {
  StateTrajectory traj;
  StateSolveStats stats;
};

/// Monolithic implicit Euler for the coupled three-field system
///   alpha mu_t + phi_t - lap mu = P(phi)(sigma + chi(1-phi) - mu) - h u1 + f1
///   beta phi_t - lap phi + F'(phi) = mu + chi sigma + f2
///   sigma_t - lap sigma = -chi lap phi - P(phi)(sigma + chi(1-phi) - mu) + u2 + f3
/// with homogeneous Neumann walls. Each step solves the fully coupled
/// nonlinear system by damped Newton with an analytic Jacobian; the control
/// and forcing columns m-1 act on step m. Throws NewtonDivergence or
/// SeparationBreach.
StateSolveResult solve_state(const GridSpec& grid, const TimeGrid& tg, const ModelParams& mp,
                             const CostParams& cost, const Control& u, const InitialData& init,
                             const SourceTriple* forcing = nullptr,
                             const SolverOptions& opts = {});

struct SeparationReport {
  scalar_t phi_min = 0.0;
  scalar_t phi_max = 0.0;
  std::int64_t clamp_count = 0;
};

/// Extrema of the phase fraction over all accepted slices plus the safeguard
/// clamp count accumulated by the solve (intermediate Newton iterates
/// included).
SeparationReport check_separation(const StateSolveResult& result);

/// Discrete continuous-dependence quotient between two forward solves:
/// sum of the space-time L2 norms of the three state differences divided by
/// the control-space distance. Throws std::invalid_argument when the controls
/// coincide.
scalar_t stability_ratio(const GridSpec& grid, const TimeGrid& tg, const ModelParams& mp,
                         const CostParams& cost, const Control& ua, const Control& ub,
                         const InitialData& init, const SolverOptions& opts = {});

}  // namespace chsc
