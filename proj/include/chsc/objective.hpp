#pragma once

#include "chsc/fields.hpp"
#include "chsc/sensitivity.hpp"

namespace chsc {

/// Smooth cost
///   J1 = b1/2 |phi - target_q|_Q^2 + b2/2 |phi(T) - target_omega|^2
///      + b3/2 |u|_Q^2.
scalar_t eval_tracking(const GridSpec& grid, const TimeGrid& tg, const CostParams& cost,
                       const StateTrajectory& traj, const Control& u);

/// Sparsity functional g(u) = integral of |u1| + |u2| over the cylinder.
scalar_t eval_sparsity(const GridSpec& grid, scalar_t dt, const Control& u);

/// J = J1 + kappa g.
scalar_t eval_total(const GridSpec& grid, const TimeGrid& tg, const CostParams& cost,
                    const StateTrajectory& traj, const Control& u);

/// Pointwise smooth-gradient pair
///   d1 = -h p + b3 u1,   d2 = r + b3 u2,
/// with control cell m paired with adjoint column m-1 (the step-m multiplier).
GradientPair smooth_gradient(const AdjointTrajectory& adj, const Control& u,
                             const CostParams& cost);

/// Directional derivative of J1 through the linearized state,
///   b1 (xi, phi* - target_q)_Q + b2 (xi(T), phi*(T) - target_omega)
///   + b3 (u, h)_Q.
/// Equals the gradient pairing up to inner-solver precision.
scalar_t gateaux_j1(const FrozenLinearization& fr, const Control& u, const Control& h);
scalar_t gateaux_j1(const FrozenLinearization& fr, const Control& u, const Control& h,
                    const LinTrajectory& lin_h);

/// Directional derivative of g at u in direction v: sign(u) v where |u| >
/// u_zero_tol, |v| elsewhere.
scalar_t g_directional(const GridSpec& grid, scalar_t dt, const Control& u, const Control& v,
                       scalar_t u_zero_tol = 1e-12);

/// Second derivative of the reduced smooth cost via the adjoint formula:
/// tracking curvature plus the control weight plus the coupling integral of
/// the second-derivative sources against (p - r, q).
scalar_t hessian_form(const FrozenLinearization& fr, const AdjointTrajectory& adj,
                      const LinTrajectory& lh, const LinTrajectory& lk, const Control& h,
                      const Control& k);
scalar_t hessian_form(const FrozenLinearization& fr, const AdjointTrajectory& adj,
                      const Control& h, const Control& k);

/// Same value through the bilinearized state (discrete integration by parts
/// makes the two routes coincide up to solver precision).
scalar_t hessian_form_bilinear(const FrozenLinearization& fr, const LinTrajectory& lh,
                               const LinTrajectory& lk, const Control& h, const Control& k);
scalar_t hessian_form_bilinear(const FrozenLinearization& fr, const Control& h, const Control& k);

}  // namespace chsc
