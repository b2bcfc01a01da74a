#pragma once

#include "chsc/grid.hpp"
#include "chsc/types.hpp"

namespace chsc {

/// Uniform partition of [0, t_final] into `steps` implicit-Euler steps.
struct TimeGrid {
  scalar_t t_final = 1.0;
  int steps = 1;
  scalar_t dt = 1.0;
};

TimeGrid build_time_grid(scalar_t t_final, int steps);

/// Initial data for the three fields; phi0 must stay strictly inside (-1,1).
struct InitialData {
  field_t mu0, phi0, sigma0;
};

/// Control pair sampled per space-time cell: rows are grid nodes, column m
/// (0-based) is the value held on the step interval (t_m, t_{m+1}].
struct Control {
  slab_t u1, u2;
};

/// Tracking / cost data. h_field is the nonnegative control weight in the
/// chemical-potential equation, sampled like a control. target_q is the
/// distributed phase target (node x time-node samples, steps+1 columns),
/// target_omega the terminal phase target.
struct CostParams {
  scalar_t b1 = 1.0;    ///< distributed tracking weight (>= 0)
  scalar_t b2 = 0.0;    ///< terminal tracking weight (>= 0)
  scalar_t b3 = 1.0;    ///< quadratic control weight (> 0)
  scalar_t kappa = 0.1; ///< sparsity weight (> 0)
  scalar_t lo1 = -1.0, hi1 = 1.0;  ///< box bounds, lo1 < 0 < hi1
  scalar_t lo2 = -1.0, hi2 = 1.0;  ///< box bounds, lo2 < 0 < hi2
  slab_t h_field;
  slab_t target_q;
  field_t target_omega;
};

/// State samples at all time nodes: steps+1 columns, column 0 = initial data.
struct StateTrajectory {
  slab_t mu, phi, sigma;
};

/// Solution of the generalized (linearized / bilinearized) system, laid out
/// like a StateTrajectory.
struct LinTrajectory {
  slab_t eta, xi, theta;
};

/// Adjoint triple with steps+1 columns. Column `steps` carries the exact
/// terminal data (p = 0, r = 0, q = b2 (phi*(T) - target_omega) / beta);
/// column m-1 carries the multiplier of forward step m, which the smooth
/// gradient pairs with control cell m.
struct AdjointTrajectory {
  slab_t p, q, r;
};

/// Sparsity multiplier pair, sampled like a control; values lie in [-1,1].
struct MultiplierPair {
  slab_t l1, l2;
};

/// Smooth reduced gradient pair, sampled like a control.
struct GradientPair {
  slab_t d1, d2;
};

/// Extra right-hand sides for the three equations, sampled at implicit nodes
/// (steps columns, column m-1 belongs to step m).
struct SourceTriple {
  slab_t f1, f2, f3;
};

/// Gate flags of the generalized linear system: l1 scales the frozen-state
/// coupling terms, l2 the control sources, l3 the explicit sources, l4 the
/// initial data. The linearized system is {1,1,0,0}, the bilinearized one
/// {1,0,1,0}.
struct GenFlags {
  int l1 = 1, l2 = 1, l3 = 0, l4 = 0;
};

Control zero_control(const GridSpec& grid, const TimeGrid& tg);

/// Clamps both components into the box; returns the number of cells moved.
index_t clamp_to_box(Control& u, const CostParams& cost);

bool inside_box(const Control& u, const CostParams& cost);

/// L2 inner product and norm on the control space (cell quadrature).
scalar_t control_inner(const GridSpec& grid, scalar_t dt, const Control& a, const Control& b);
scalar_t control_norm(const GridSpec& grid, scalar_t dt, const Control& a);

/// Sum of the space-time L2 norms of the three field differences.
scalar_t state_distance(const GridSpec& grid, scalar_t dt, const StateTrajectory& a,
                        const StateTrajectory& b);

scalar_t adjoint_distance(const GridSpec& grid, scalar_t dt, const AdjointTrajectory& a,
                          const AdjointTrajectory& b);

}  // namespace chsc
