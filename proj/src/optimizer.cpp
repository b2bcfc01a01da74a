#include "chsc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "chsc/errors.hpp"

namespace chsc {

slab_t prox_box_l1(const slab_t& w, scalar_t threshold, scalar_t lo, scalar_t hi) {
  slab_t out(w.rows(), w.cols());
  for (index_t m = 0; m < w.cols(); ++m) {
    for (index_t i = 0; i < w.rows(); ++i) {
      const scalar_t v = w(i, m);
      const scalar_t mag = std::abs(v) - threshold;
      scalar_t s = (mag > 0.0) ? (v > 0.0 ? mag : -mag) : 0.0;
      if (s < lo) s = lo;
      if (s > hi) s = hi;
      out(i, m) = s;
    }
  }
  return out;
}

Control prox_control(const Control& w, scalar_t threshold, const CostParams& cost) {
  Control out;
  out.u1 = prox_box_l1(w.u1, threshold, cost.lo1, cost.hi1);
  out.u2 = prox_box_l1(w.u2, threshold, cost.lo2, cost.hi2);
  return out;
}

scalar_t stationarity_residual(const GridSpec& grid, scalar_t dt, const Control& u,
                               const GradientPair& grad, const CostParams& cost, scalar_t tau) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("stationarity_residual: tau must be positive");
  }
  Control trial;
  trial.u1 = u.u1 - tau * grad.d1;
  trial.u2 = u.u2 - tau * grad.d2;
  const Control proxed = prox_control(trial, tau * cost.kappa, cost);
  Control diff;
  diff.u1 = u.u1 - proxed.u1;
  diff.u2 = u.u2 - proxed.u2;
  return control_norm(grid, dt, diff) / tau;
}

MultiplierPair recover_multipliers(const Control& u, const GradientPair& grad,
                                   const CostParams& cost) {
  MultiplierPair lam;
  auto recover = [&](const slab_t& uc, const slab_t& dc, slab_t& out) {
    out.resize(uc.rows(), uc.cols());
    for (index_t m = 0; m < uc.cols(); ++m) {
      for (index_t i = 0; i < uc.rows(); ++i) {
        const scalar_t ui = uc(i, m);
        if (ui != 0.0) {
          out(i, m) = (ui > 0.0) ? 1.0 : -1.0;
        } else {
          out(i, m) = std::clamp(-dc(i, m) / cost.kappa, -1.0, 1.0);
        }
      }
    }
  };
  recover(u.u1, grad.d1, lam.l1);
  recover(u.u2, grad.d2, lam.l2);
  return lam;
}

namespace {

scalar_t zero_fraction(const slab_t& w) {
  index_t zeros = 0;
  for (index_t m = 0; m < w.cols(); ++m) {
    for (index_t i = 0; i < w.rows(); ++i) {
      if (w(i, m) == 0.0) ++zeros;
    }
  }
  return static_cast<scalar_t>(zeros) / static_cast<scalar_t>(w.size());
}

}  // namespace

OptimizeResult optimize(const GridSpec& grid, const TimeGrid& tg, const ModelParams& mp,
                        const CostParams& cost, const Control& u_start, const InitialData& init,
                        const OptimizerOptions& opts) {
  OptimizeResult res;
  res.u = u_start;
  clamp_to_box(res.u, cost);

  const scalar_t tau_cap = (opts.tau0 > 0.0) ? opts.tau0 : 1.0 / cost.b3;
  scalar_t tau = tau_cap;

  StateSolveResult st = solve_state(grid, tg, mp, cost, res.u, init, nullptr, opts.inner);
  scalar_t j_smooth = eval_tracking(grid, tg, cost, st.traj, res.u);
  scalar_t j_sparse = eval_sparsity(grid, tg.dt, res.u);
  scalar_t j_total = j_smooth + cost.kappa * j_sparse;
  int last_backtracks = 0;

  for (int iter = 0;; ++iter) {
    FrozenLinearization frozen(grid, tg, mp, cost, st.traj, opts.inner);
    res.adjoint = solve_adjoint(frozen);
    res.gradient = smooth_gradient(res.adjoint, res.u, cost);
    const scalar_t residual =
        stationarity_residual(grid, tg.dt, res.u, res.gradient, cost, tau);

    IterateRecord rec;
    rec.iter = iter;
    rec.j_total = j_total;
    rec.j_smooth = j_smooth;
    rec.j_sparsity = j_sparse;
    rec.residual = residual;
    rec.tau = tau;
    rec.backtracks = last_backtracks;
    rec.zero_frac1 = zero_fraction(res.u.u1);
    rec.zero_frac2 = zero_fraction(res.u.u2);
    res.history.push_back(rec);

    res.final_residual = residual;
    res.iterations = iter;
    if (residual <= opts.stat_tol) {
      res.converged = true;
      break;
    }
    if (iter >= opts.max_outer) {
      res.converged = false;
      break;
    }

    // Proximal step with sufficient-decrease backtracking.
    scalar_t tau_try = std::min(2.0 * tau, tau_cap);
    int backtracks = 0;
    Control u_new;
    StateSolveResult st_new;
    scalar_t j_smooth_new = 0.0, j_sparse_new = 0.0, j_total_new = 0.0;
    for (;;) {
      Control shifted;
      shifted.u1 = res.u.u1 - tau_try * res.gradient.d1;
      shifted.u2 = res.u.u2 - tau_try * res.gradient.d2;
      u_new = prox_control(shifted, tau_try * cost.kappa, cost);
      Control diff;
      diff.u1 = u_new.u1 - res.u.u1;
      diff.u2 = u_new.u2 - res.u.u2;
      const scalar_t dist2 = control_inner(grid, tg.dt, diff, diff);
      st_new = solve_state(grid, tg, mp, cost, u_new, init, nullptr, opts.inner);
      j_smooth_new = eval_tracking(grid, tg, cost, st_new.traj, u_new);
      j_sparse_new = eval_sparsity(grid, tg.dt, u_new);
      j_total_new = j_smooth_new + cost.kappa * j_sparse_new;
      if (j_total_new <= j_total - (opts.armijo / tau_try) * dist2) break;
      tau_try *= opts.backtrack;
      ++backtracks;
      if (tau_try < opts.tau_min) {
        throw StepCollapse("optimize: backtracking collapsed below tau_min at iteration " +
                           std::to_string(iter));
      }
    }
    res.u = u_new;
    st = st_new;
    j_smooth = j_smooth_new;
    j_sparse = j_sparse_new;
    j_total = j_total_new;
    tau = tau_try;
    last_backtracks = backtracks;
  }

  res.state = st.traj;
  res.state_stats = st.stats;
  res.multipliers = recover_multipliers(res.u, res.gradient, cost);
  res.j_total = j_total;
  res.j_smooth = j_smooth;
  res.j_sparsity = j_sparse;
  return res;
}

}  // namespace chsc
