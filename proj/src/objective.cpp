#include "chsc/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace chsc {

scalar_t eval_tracking(const GridSpec& grid, const TimeGrid& tg, const CostParams& cost,
                       const StateTrajectory& traj, const Control& u) {
  if (traj.phi.cols() != tg.steps + 1 || cost.target_q.cols() != tg.steps + 1) {
    throw std::invalid_argument("eval_tracking: slice count mismatch");
  }
  const slab_t miss = traj.phi - cost.target_q;
  scalar_t j = 0.5 * cost.b1 * inner_l2_q(grid, miss, miss, tg.dt);
  const field_t miss_t = traj.phi.col(tg.steps).array() - cost.target_omega;
  j += 0.5 * cost.b2 * inner_omega(grid, miss_t, miss_t);
  j += 0.5 * cost.b3 * control_inner(grid, tg.dt, u, u);
  return j;
}

scalar_t eval_sparsity(const GridSpec& grid, scalar_t dt, const Control& u) {
  return inner_q_cells(grid, u.u1.cwiseAbs(), slab_t::Ones(u.u1.rows(), u.u1.cols()), dt) +
         inner_q_cells(grid, u.u2.cwiseAbs(), slab_t::Ones(u.u2.rows(), u.u2.cols()), dt);
}

scalar_t eval_total(const GridSpec& grid, const TimeGrid& tg, const CostParams& cost,
                    const StateTrajectory& traj, const Control& u) {
  return eval_tracking(grid, tg, cost, traj, u) + cost.kappa * eval_sparsity(grid, tg.dt, u);
}

GradientPair smooth_gradient(const AdjointTrajectory& adj, const Control& u,
                             const CostParams& cost) {
  const index_t steps = u.u1.cols();
  if (adj.p.cols() != steps + 1 || cost.h_field.cols() != steps) {
    throw std::invalid_argument("smooth_gradient: slice count mismatch");
  }
  GradientPair g;
  g.d1.resize(u.u1.rows(), steps);
  g.d2.resize(u.u2.rows(), steps);
  for (index_t m = 0; m < steps; ++m) {
    g.d1.col(m) = (-cost.h_field.col(m).array() * adj.p.col(m).array() +
                   cost.b3 * u.u1.col(m).array())
                      .matrix();
    g.d2.col(m) = (adj.r.col(m).array() + cost.b3 * u.u2.col(m).array()).matrix();
  }
  return g;
}

scalar_t gateaux_j1(const FrozenLinearization& fr, const Control& u, const Control& h,
                    const LinTrajectory& lin_h) {
  const GridSpec& grid = fr.grid();
  const TimeGrid& tg = fr.time_grid();
  const CostParams& cost = fr.cost();
  const slab_t miss = fr.state().phi - cost.target_q;
  scalar_t v = cost.b1 * inner_l2_q(grid, lin_h.xi, miss, tg.dt);
  v += cost.b2 * inner_omega(grid, lin_h.xi.col(tg.steps).array(),
                             fr.state().phi.col(tg.steps).array() - cost.target_omega);
  v += cost.b3 * control_inner(grid, tg.dt, u, h);
  return v;
}

scalar_t gateaux_j1(const FrozenLinearization& fr, const Control& u, const Control& h) {
  return gateaux_j1(fr, u, h, solve_linearized(fr, h));
}

scalar_t g_directional(const GridSpec& grid, scalar_t dt, const Control& u, const Control& v,
                       scalar_t u_zero_tol) {
  scalar_t total = 0.0;
  auto accumulate = [&](const slab_t& uc, const slab_t& vc) {
    for (index_t m = 0; m < uc.cols(); ++m) {
      for (index_t i = 0; i < uc.rows(); ++i) {
        const scalar_t ui = uc(i, m);
        const scalar_t vi = vc(i, m);
        const scalar_t integrand =
            (std::abs(ui) > u_zero_tol) ? (ui > 0.0 ? vi : -vi) : std::abs(vi);
        total += dt * grid.weights[i] * integrand;
      }
    }
  };
  accumulate(u.u1, v.u1);
  accumulate(u.u2, v.u2);
  return total;
}

scalar_t hessian_form(const FrozenLinearization& fr, const AdjointTrajectory& adj,
                      const LinTrajectory& lh, const LinTrajectory& lk, const Control& h,
                      const Control& k) {
  const GridSpec& grid = fr.grid();
  const TimeGrid& tg = fr.time_grid();
  const CostParams& cost = fr.cost();
  scalar_t q = cost.b1 * inner_l2_q(grid, lh.xi, lk.xi, tg.dt);
  q += cost.b2 *
       inner_omega(grid, lh.xi.col(tg.steps).array(), lk.xi.col(tg.steps).array());
  q += cost.b3 * control_inner(grid, tg.dt, h, k);
  const SourceTriple s = bilinear_sources(fr, lh, lk);
  for (int m = 1; m <= tg.steps; ++m) {
    const field_t pr = adj.p.col(m - 1).array() - adj.r.col(m - 1).array();
    q += tg.dt * inner_omega(grid, pr, s.f1.col(m - 1).array());
    q += tg.dt * inner_omega(grid, adj.q.col(m - 1).array(), s.f2.col(m - 1).array());
  }
  return q;
}

scalar_t hessian_form(const FrozenLinearization& fr, const AdjointTrajectory& adj,
                      const Control& h, const Control& k) {
  const LinTrajectory lh = solve_linearized(fr, h);
  const LinTrajectory lk = solve_linearized(fr, k);
  return hessian_form(fr, adj, lh, lk, h, k);
}

scalar_t hessian_form_bilinear(const FrozenLinearization& fr, const LinTrajectory& lh,
                               const LinTrajectory& lk, const Control& h, const Control& k) {
  const GridSpec& grid = fr.grid();
  const TimeGrid& tg = fr.time_grid();
  const CostParams& cost = fr.cost();
  const LinTrajectory second = solve_bilinearized(fr, lh, lk);
  const slab_t miss = fr.state().phi - cost.target_q;
  scalar_t q = cost.b1 * inner_l2_q(grid, miss, second.xi, tg.dt);
  q += cost.b2 * inner_omega(grid, fr.state().phi.col(tg.steps).array() - cost.target_omega,
                             second.xi.col(tg.steps).array());
  q += cost.b1 * inner_l2_q(grid, lh.xi, lk.xi, tg.dt);
  q += cost.b2 *
       inner_omega(grid, lh.xi.col(tg.steps).array(), lk.xi.col(tg.steps).array());
  q += cost.b3 * control_inner(grid, tg.dt, h, k);
  return q;
}

scalar_t hessian_form_bilinear(const FrozenLinearization& fr, const Control& h,
                               const Control& k) {
  const LinTrajectory lh = solve_linearized(fr, h);
  const LinTrajectory lk = solve_linearized(fr, k);
  return hessian_form_bilinear(fr, lh, lk, h, k);
}

}  // namespace chsc
