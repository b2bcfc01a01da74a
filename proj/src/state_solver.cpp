#include "chsc/state_solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "chsc/errors.hpp"
#include "assembly.hpp"
#include "step_solver.hpp"

namespace chsc {

namespace {

void validate_inputs(const GridSpec& grid, const TimeGrid& tg, const CostParams& cost,
                     const Control& u, const InitialData& init, const SourceTriple* forcing) {
  const index_t n = grid.nodes();
  if (init.mu0.size() != n || init.phi0.size() != n || init.sigma0.size() != n) {
    throw std::invalid_argument("solve_state: initial data size does not match grid");
  }
  if (!(init.phi0.abs().maxCoeff() < 1.0)) {
    throw std::invalid_argument("solve_state: initial phase must lie strictly inside (-1,1)");
  }
  if (u.u1.rows() != n || u.u2.rows() != n || u.u1.cols() != tg.steps || u.u2.cols() != tg.steps) {
    throw std::invalid_argument("solve_state: control shape must be nodes x steps");
  }
  if (cost.h_field.rows() != n || cost.h_field.cols() != tg.steps) {
    throw std::invalid_argument("solve_state: h_field shape must be nodes x steps");
  }
  if (forcing != nullptr) {
    if (forcing->f1.rows() != n || forcing->f1.cols() != tg.steps || forcing->f2.rows() != n ||
        forcing->f2.cols() != tg.steps || forcing->f3.rows() != n ||
        forcing->f3.cols() != tg.steps) {
      throw std::invalid_argument("solve_state: forcing shape must be nodes x steps");
    }
  }
}

struct StepData {
  field_t mu_prev, phi_prev, sigma_prev;
  field_t hu1, u2;
  field_t f1, f2, f3;
};

vector_t step_residual(const GridSpec& grid, const TimeGrid& tg, const ModelParams& mp,
                       const sparse_t& lap, const StepData& sd, const field_t& mu,
                       const field_t& phi, const field_t& sigma, ClampMonitor* mon) {
  const index_t n = grid.nodes();
  const scalar_t idt = 1.0 / tg.dt;
  const field_t lap_mu = (lap * mu.matrix()).array();
  const field_t lap_phi = (lap * phi.matrix()).array();
  const field_t lap_sigma = (lap * sigma.matrix()).array();
  field_t pphi(n), fprime(n);
  for (index_t i = 0; i < n; ++i) {
    pphi[i] = proliferation(mp, phi[i], 0);
    fprime[i] = potential(mp, phi[i], 1, mon);
  }
  const field_t c = sigma + mp.chi * (1.0 - phi) - mu;
  vector_t res(3 * n);
  res.segment(0, n) = mp.alpha * idt * (mu - sd.mu_prev) + idt * (phi - sd.phi_prev) - lap_mu -
                      pphi * c + sd.hu1 - sd.f1;
  res.segment(n, n) =
      mp.beta * idt * (phi - sd.phi_prev) - lap_phi + fprime - mu - mp.chi * sigma - sd.f2;
  res.segment(2 * n, n) =
      idt * (sigma - sd.sigma_prev) - lap_sigma + mp.chi * lap_phi + pphi * c - sd.u2 - sd.f3;
  return res;
}

}  // namespace

StateSolveResult solve_state(const GridSpec& grid, const TimeGrid& tg, const ModelParams& mp,
                             const CostParams& cost, const Control& u, const InitialData& init,
                             const SourceTriple* forcing, const SolverOptions& opts) {
  validate_inputs(grid, tg, cost, u, init, forcing);
  const index_t n = grid.nodes();
  const sparse_t lap = neumann_laplacian_matrix(grid);

  StateSolveResult out;
  out.stats.control_bounds_warning = !inside_box(u, cost);
  out.traj.mu.resize(n, tg.steps + 1);
  out.traj.phi.resize(n, tg.steps + 1);
  out.traj.sigma.resize(n, tg.steps + 1);
  out.traj.mu.col(0) = init.mu0.matrix();
  out.traj.phi.col(0) = init.phi0.matrix();
  out.traj.sigma.col(0) = init.sigma0.matrix();

  ClampMonitor monitor;
  StepLinearSolver linear(grid.dim, opts.krylov_tol);

  for (int m = 1; m <= tg.steps; ++m) {
    StepData sd;
    sd.mu_prev = out.traj.mu.col(m - 1).array();
    sd.phi_prev = out.traj.phi.col(m - 1).array();
    sd.sigma_prev = out.traj.sigma.col(m - 1).array();
    sd.hu1 = cost.h_field.col(m - 1).array() * u.u1.col(m - 1).array();
    sd.u2 = u.u2.col(m - 1).array();
    if (forcing != nullptr) {
      sd.f1 = forcing->f1.col(m - 1).array();
      sd.f2 = forcing->f2.col(m - 1).array();
      sd.f3 = forcing->f3.col(m - 1).array();
    } else {
      sd.f1 = field_t::Zero(n);
      sd.f2 = field_t::Zero(n);
      sd.f3 = field_t::Zero(n);
    }

    field_t mu = sd.mu_prev, phi = sd.phi_prev, sigma = sd.sigma_prev;
    if (opts.guess == NewtonGuess::Extrapolated && m >= 2) {
      mu = 2.0 * sd.mu_prev - out.traj.mu.col(m - 2).array();
      phi = 2.0 * sd.phi_prev - out.traj.phi.col(m - 2).array();
      sigma = 2.0 * sd.sigma_prev - out.traj.sigma.col(m - 2).array();
    }

    vector_t res = step_residual(grid, tg, mp, lap, sd, mu, phi, sigma, &monitor);
    scalar_t res_norm = res.lpNorm<Eigen::Infinity>();
    int iters = 0;
    while (res_norm > opts.newton_tol) {
      if (iters >= opts.newton_max_iters) {
        throw NewtonDivergence("solve_state: step " + std::to_string(m) + " stalled at residual " +
                               std::to_string(res_norm));
      }
      const StepCoeffs co = make_step_coeffs(mp, mu, phi, sigma, &monitor);
      linear.factor(assemble_forward_step(grid, lap, tg.dt, mp, co, true));
      const vector_t step = linear.solve(-res);
      scalar_t t = 1.0;
      field_t mu_c, phi_c, sigma_c;
      vector_t res_c;
      scalar_t res_c_norm = 0.0;
      int halvings = 0;
      for (;;) {
        mu_c = mu + t * step.segment(0, n).array();
        phi_c = phi + t * step.segment(n, n).array();
        sigma_c = sigma + t * step.segment(2 * n, n).array();
        res_c = step_residual(grid, tg, mp, lap, sd, mu_c, phi_c, sigma_c, &monitor);
        res_c_norm = res_c.lpNorm<Eigen::Infinity>();
        if (res_c_norm < res_norm || res_c_norm <= opts.newton_tol) break;
        if (++halvings > opts.max_halvings) {
          throw NewtonDivergence("solve_state: step " + std::to_string(m) +
                                 " damping failed at residual " + std::to_string(res_norm));
        }
        t *= 0.5;
      }
      mu = mu_c;
      phi = phi_c;
      sigma = sigma_c;
      res = res_c;
      res_norm = res_c_norm;
      ++iters;
      if (monitor.count.load(std::memory_order_relaxed) > opts.clamp_budget) {
        throw SeparationBreach("solve_state: clamp budget exhausted at step " + std::to_string(m));
      }
    }
    out.stats.total_newton_iters += iters;
    out.stats.max_step_iters = std::max(out.stats.max_step_iters, iters);
    out.stats.max_final_residual = std::max(out.stats.max_final_residual, res_norm);
    out.traj.mu.col(m) = mu.matrix();
    out.traj.phi.col(m) = phi.matrix();
    out.traj.sigma.col(m) = sigma.matrix();
  }
  out.stats.clamp_count = monitor.count.load(std::memory_order_relaxed);
  return out;
}

SeparationReport check_separation(const StateSolveResult& result) {
  SeparationReport rep;
  rep.phi_min = result.traj.phi.minCoeff();
  rep.phi_max = result.traj.phi.maxCoeff();
  rep.clamp_count = result.stats.clamp_count;
  return rep;
}

scalar_t stability_ratio(const GridSpec& grid, const TimeGrid& tg, const ModelParams& mp,
                         const CostParams& cost, const Control& ua, const Control& ub,
                         const InitialData& init, const SolverOptions& opts) {
  Control diff;
  diff.u1 = ua.u1 - ub.u1;
  diff.u2 = ua.u2 - ub.u2;
  const scalar_t denom = control_norm(grid, tg.dt, diff);
  if (denom == 0.0) {
    throw std::invalid_argument("stability_ratio: controls coincide");
  }
  const StateSolveResult a = solve_state(grid, tg, mp, cost, ua, init, nullptr, opts);
  const StateSolveResult b = solve_state(grid, tg, mp, cost, ub, init, nullptr, opts);
  return state_distance(grid, tg.dt, a.traj, b.traj) / denom;
}

}  // namespace chsc
