#pragma once

#include <vector>

#include "chsc/fields.hpp"
#include "chsc/objective.hpp"
#include "chsc/sensitivity.hpp"
#include "chsc/state_solver.hpp"

namespace chsc {

struct OptimizerOptions {
  scalar_t stat_tol = 1e-8;   ///< stop when the proximal residual drops below this
  int max_outer = 500;
  scalar_t armijo = 1e-4;     ///< sufficient-decrease constant
  scalar_t backtrack = 0.5;   ///< step shrink factor
  scalar_t tau0 = 0.0;        ///< initial/maximal step; <= 0 selects 1/b3
  scalar_t tau_min = 1e-14;   ///< StepCollapse below this
  SolverOptions inner;
};

struct IterateRecord {
  int iter = 0;
  scalar_t j_total = 0.0, j_smooth = 0.0, j_sparsity = 0.0;
  scalar_t residual = 0.0;
  scalar_t tau = 0.0;
  int backtracks = 0;            ///< halvings spent reaching this iterate
  scalar_t zero_frac1 = 0.0, zero_frac2 = 0.0;
};

struct OptimizeResult {
  Control u;
  StateTrajectory state;
  StateSolveStats state_stats;
  AdjointTrajectory adjoint;
  GradientPair gradient;
  MultiplierPair multipliers;
  std::vector<IterateRecord> history;
  bool converged = false;
  int iterations = 0;
  scalar_t final_residual = 0.0;
  scalar_t j_total = 0.0, j_smooth = 0.0, j_sparsity = 0.0;
};

/// Elementwise soft-threshold followed by the box clamp:
///   clamp(sign(w) max(|w| - threshold, 0), lo, hi).
/// Ties |w| = threshold land exactly on 0.
slab_t prox_box_l1(const slab_t& w, scalar_t threshold, scalar_t lo, scalar_t hi);
Control prox_control(const Control& w, scalar_t threshold, const CostParams& cost);

/// |u - prox(u - tau grad)| / tau in the control norm.
scalar_t stationarity_residual(const GridSpec& grid, scalar_t dt, const Control& u,
                               const GradientPair& grad, const CostParams& cost, scalar_t tau);

/// Sparsity multipliers: sign(u_i) on the support, clamp(-d_i/kappa, -1, 1)
/// on exact zeros.
MultiplierPair recover_multipliers(const Control& u, const GradientPair& grad,
                                   const CostParams& cost);

/// Proximal gradient with Armijo backtracking on the full objective.
/// The start iterate is projected into the box; every iterate stays feasible
/// and the recorded objective values are nonincreasing. Throws StepCollapse
/// when backtracking exhausts the step; an exhausted iteration budget returns
/// the partial result with converged = false.
OptimizeResult optimize(const GridSpec& grid, const TimeGrid& tg, const ModelParams& mp,
                        const CostParams& cost, const Control& u_start, const InitialData& init,
                        const OptimizerOptions& opts = {});

}  // namespace chsc
