#include "chsc/sensitivity.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "chsc/errors.hpp"
#include "assembly.hpp"
#include "step_solver.hpp"

namespace chsc {

struct FrozenLinearization::Impl {
  GridSpec grid;
  TimeGrid tg;
  ModelParams mp;
  CostParams cost;
  StateTrajectory state;
  SolverOptions opts;
  sparse_t lap;
  // per step m (index m-1)
  std::vector<field_t> P, Pp, Ppp, c, Fpp, F3;
  mutable std::vector<sparse_t> fwd_mat, adj_mat;
  mutable std::vector<std::unique_ptr<StepLinearSolver>> fwd_solver, adj_solver;

  void require_step(int m) const {
    if (m < 1 || m > tg.steps) {
      throw std::out_of_range("FrozenLinearization: step index " + std::to_string(m));
    }
  }

  StepCoeffs coeffs(int m) const {
    StepCoeffs co;
    co.P = P[m - 1];
    co.Ppc = Pp[m - 1] * c[m - 1];
    co.Fpp = Fpp[m - 1];
    return co;
  }

  const sparse_t& forward(int m) const {
    require_step(m);
    if (fwd_mat[m - 1].rows() == 0) {
      fwd_mat[m - 1] = assemble_forward_step(grid, lap, tg.dt, mp, coeffs(m), true);
    }
    return fwd_mat[m - 1];
  }

  const sparse_t& adjoint(int m) const {
    require_step(m);
    if (adj_mat[m - 1].rows() == 0) {
      adj_mat[m - 1] = assemble_adjoint_step(grid, lap, tg.dt, mp, coeffs(m));
    }
    return adj_mat[m - 1];
  }
};

FrozenLinearization::FrozenLinearization(const GridSpec& grid, const TimeGrid& tg,
                                         const ModelParams& mp, const CostParams& cost,
                                         const StateTrajectory& frozen, const SolverOptions& opts)
    : impl_(std::make_unique<Impl>()) {
  const index_t n = grid.nodes();
  if (frozen.phi.rows() != n || frozen.phi.cols() != tg.steps + 1 || frozen.mu.rows() != n ||
      frozen.sigma.rows() != n || frozen.mu.cols() != tg.steps + 1 ||
      frozen.sigma.cols() != tg.steps + 1) {
    throw std::invalid_argument("FrozenLinearization: trajectory shape mismatch");
  }
  if (cost.target_q.rows() != n || cost.target_q.cols() != tg.steps + 1 ||
      cost.target_omega.size() != n) {
    throw std::invalid_argument("FrozenLinearization: target shape mismatch");
  }
  if (cost.h_field.rows() != n || cost.h_field.cols() != tg.steps) {
    throw std::invalid_argument("FrozenLinearization: h_field shape mismatch");
  }
  impl_->grid = grid;
  impl_->tg = tg;
  impl_->mp = mp;
  impl_->cost = cost;
  impl_->state = frozen;
  impl_->opts = opts;
  impl_->lap = neumann_laplacian_matrix(grid);
  impl_->P.resize(tg.steps);
  impl_->Pp.resize(tg.steps);
  impl_->Ppp.resize(tg.steps);
  impl_->c.resize(tg.steps);
  impl_->Fpp.resize(tg.steps);
  impl_->F3.resize(tg.steps);
  impl_->fwd_mat.resize(tg.steps);
  impl_->adj_mat.resize(tg.steps);
  impl_->fwd_solver.resize(tg.steps);
  impl_->adj_solver.resize(tg.steps);
  for (int m = 1; m <= tg.steps; ++m) {
    const field_t mu = frozen.mu.col(m).array();
    const field_t phi = frozen.phi.col(m).array();
    const field_t sigma = frozen.sigma.col(m).array();
    field_t p(n), pp(n), ppp(n), fpp(n), f3(n);
    for (index_t i = 0; i < n; ++i) {
      p[i] = proliferation(mp, phi[i], 0);
      pp[i] = proliferation(mp, phi[i], 1);
      ppp[i] = proliferation(mp, phi[i], 2);
      fpp[i] = potential(mp, phi[i], 2, nullptr);
      f3[i] = potential(mp, phi[i], 3, nullptr);
    }
    impl_->P[m - 1] = std::move(p);
    impl_->Pp[m - 1] = std::move(pp);
    impl_->Ppp[m - 1] = std::move(ppp);
    impl_->c[m - 1] = sigma + mp.chi * (1.0 - phi) - mu;
    impl_->Fpp[m - 1] = std::move(fpp);
    impl_->F3[m - 1] = std::move(f3);
  }
}

FrozenLinearization::~FrozenLinearization() = default;
FrozenLinearization::FrozenLinearization(FrozenLinearization&&) noexcept = default;
FrozenLinearization& FrozenLinearization::operator=(FrozenLinearization&&) noexcept = default;

const GridSpec& FrozenLinearization::grid() const { return impl_->grid; }
const TimeGrid& FrozenLinearization::time_grid() const { return impl_->tg; }
const ModelParams& FrozenLinearization::model() const { return impl_->mp; }
const CostParams& FrozenLinearization::cost() const { return impl_->cost; }
const StateTrajectory& FrozenLinearization::state() const { return impl_->state; }

const field_t& FrozenLinearization::coeff_P(int m) const {
  impl_->require_step(m);
  return impl_->P[m - 1];
}
const field_t& FrozenLinearization::coeff_Pp(int m) const {
  impl_->require_step(m);
  return impl_->Pp[m - 1];
}
const field_t& FrozenLinearization::coeff_Ppp(int m) const {
  impl_->require_step(m);
  return impl_->Ppp[m - 1];
}
const field_t& FrozenLinearization::coeff_c(int m) const {
  impl_->require_step(m);
  return impl_->c[m - 1];
}
const field_t& FrozenLinearization::coeff_F3(int m) const {
  impl_->require_step(m);
  return impl_->F3[m - 1];
}

const sparse_t& FrozenLinearization::forward_matrix(int m) const { return impl_->forward(m); }
const sparse_t& FrozenLinearization::adjoint_matrix(int m) const { return impl_->adjoint(m); }

vector_t FrozenLinearization::solve_forward_step(int m, const vector_t& rhs) const {
  impl_->require_step(m);
  auto& solver = impl_->fwd_solver[m - 1];
  if (!solver) {
    solver = std::make_unique<StepLinearSolver>(impl_->grid.dim, impl_->opts.krylov_tol);
    solver->factor(impl_->forward(m));
  }
  return solver->solve(rhs);
}

vector_t FrozenLinearization::solve_adjoint_step(int m, const vector_t& rhs) const {
  impl_->require_step(m);
  auto& solver = impl_->adj_solver[m - 1];
  if (!solver) {
    solver = std::make_unique<StepLinearSolver>(impl_->grid.dim, impl_->opts.krylov_tol);
    solver->factor(impl_->adjoint(m));
  }
  return solver->solve(rhs);
}

LinTrajectory solve_generalized(const FrozenLinearization& fr, const GenFlags& flags,
                                const Control* h, const SourceTriple* f, const InitialData* init) {
  const GridSpec& grid = fr.grid();
  const TimeGrid& tg = fr.time_grid();
  const ModelParams& mp = fr.model();
  const index_t n = grid.nodes();
  if (flags.l2 != 0 && h == nullptr) {
    throw std::invalid_argument("solve_generalized: flag l2 set but no control direction given");
  }
  if (flags.l3 != 0 && f == nullptr) {
    throw std::invalid_argument("solve_generalized: flag l3 set but no sources given");
  }
  if (flags.l4 != 0 && init == nullptr) {
    throw std::invalid_argument("solve_generalized: flag l4 set but no initial data given");
  }

  LinTrajectory out;
  out.eta = slab_t::Zero(n, tg.steps + 1);
  out.xi = slab_t::Zero(n, tg.steps + 1);
  out.theta = slab_t::Zero(n, tg.steps + 1);
  if (flags.l4 != 0) {
    out.eta.col(0) = init->mu0.matrix();
    out.xi.col(0) = init->phi0.matrix();
    out.theta.col(0) = init->sigma0.matrix();
  }

  const scalar_t idt = 1.0 / tg.dt;
  // Slow path for the uncoupled operator (l1 = 0): assembled per call.
  std::unique_ptr<StepLinearSolver> uncoupled;
  sparse_t uncoupled_mat;
  if (flags.l1 == 0) {
    StepCoeffs co;
    co.P = field_t::Zero(n);
    co.Ppc = field_t::Zero(n);
    co.Fpp = field_t::Zero(n);
    uncoupled_mat =
        assemble_forward_step(grid, neumann_laplacian_matrix(grid), tg.dt, mp, co, false);
    uncoupled = std::make_unique<StepLinearSolver>(grid.dim, 1e-12);
    uncoupled->factor(uncoupled_mat);
  }

  vector_t rhs(3 * n);
  for (int m = 1; m <= tg.steps; ++m) {
    rhs.segment(0, n) =
        mp.alpha * idt * out.eta.col(m - 1) + idt * out.xi.col(m - 1);
    rhs.segment(n, n) = mp.beta * idt * out.xi.col(m - 1);
    rhs.segment(2 * n, n) = idt * out.theta.col(m - 1);
    if (flags.l2 != 0) {
      rhs.segment(0, n) -=
          (fr.cost().h_field.col(m - 1).array() * h->u1.col(m - 1).array()).matrix();
      rhs.segment(2 * n, n) += h->u2.col(m - 1);
    }
    if (flags.l3 != 0) {
      rhs.segment(0, n) += f->f1.col(m - 1);
      rhs.segment(n, n) += f->f2.col(m - 1);
      rhs.segment(2 * n, n) += f->f3.col(m - 1);
    }
    const vector_t y =
        (flags.l1 != 0) ? fr.solve_forward_step(m, rhs) : uncoupled->solve(rhs);
    out.eta.col(m) = y.segment(0, n);
    out.xi.col(m) = y.segment(n, n);
    out.theta.col(m) = y.segment(2 * n, n);
  }
  return out;
}

LinTrajectory solve_linearized(const FrozenLinearization& fr, const Control& h) {
  return solve_generalized(fr, GenFlags{1, 1, 0, 0}, &h, nullptr, nullptr);
}

SourceTriple bilinear_sources(const FrozenLinearization& fr, const LinTrajectory& lh,
                              const LinTrajectory& lk) {
  const TimeGrid& tg = fr.time_grid();
  const index_t n = fr.grid().nodes();
  SourceTriple s;
  s.f1.resize(n, tg.steps);
  s.f2.resize(n, tg.steps);
  s.f3.resize(n, tg.steps);
  for (int m = 1; m <= tg.steps; ++m) {
    const field_t xh = lh.xi.col(m).array();
    const field_t xk = lk.xi.col(m).array();
    const field_t gh = lh.theta.col(m).array() - fr.model().chi * xh - lh.eta.col(m).array();
    const field_t gk = lk.theta.col(m).array() - fr.model().chi * xk - lk.eta.col(m).array();
    const field_t f1 =
        fr.coeff_Pp(m) * (xk * gh + xh * gk) + fr.coeff_Ppp(m) * fr.coeff_c(m) * xh * xk;
    s.f1.col(m - 1) = f1.matrix();
    s.f2.col(m - 1) = (-fr.coeff_F3(m) * xh * xk).matrix();
    s.f3.col(m - 1) = (-f1).matrix();
  }
  return s;
}

LinTrajectory solve_bilinearized(const FrozenLinearization& fr, const LinTrajectory& lh,
                                 const LinTrajectory& lk) {
  const SourceTriple s = bilinear_sources(fr, lh, lk);
  return solve_generalized(fr, GenFlags{1, 0, 1, 0}, nullptr, &s, nullptr);
}

LinTrajectory solve_bilinearized(const FrozenLinearization& fr, const Control& h,
                                 const Control& k) {
  const LinTrajectory lh = solve_linearized(fr, h);
  const LinTrajectory lk = solve_linearized(fr, k);
  return solve_bilinearized(fr, lh, lk);
}

AdjointTrajectory solve_adjoint(const FrozenLinearization& fr) {
  const GridSpec& grid = fr.grid();
  const TimeGrid& tg = fr.time_grid();
  const ModelParams& mp = fr.model();
  const CostParams& cost = fr.cost();
  const index_t n = grid.nodes();
  const scalar_t idt = 1.0 / tg.dt;

  AdjointTrajectory adj;
  adj.p = slab_t::Zero(n, tg.steps + 1);
  adj.q = slab_t::Zero(n, tg.steps + 1);
  adj.r = slab_t::Zero(n, tg.steps + 1);
  adj.q.col(tg.steps) =
      (cost.b2 / mp.beta) *
      (fr.state().phi.col(tg.steps).array() - cost.target_omega).matrix();

  vector_t rhs(3 * n);
  for (int m = tg.steps; m >= 1; --m) {
    const scalar_t track_w = (m == tg.steps) ? 0.5 : 1.0;
    rhs.segment(0, n) = mp.alpha * idt * adj.p.col(m);
    rhs.segment(n, n) = idt * adj.p.col(m) + mp.beta * idt * adj.q.col(m) +
                        cost.b1 * track_w *
                            (fr.state().phi.col(m) - cost.target_q.col(m));
    rhs.segment(2 * n, n) = idt * adj.r.col(m);
    const vector_t x = fr.solve_adjoint_step(m, rhs);
    adj.p.col(m - 1) = x.segment(0, n);
    adj.q.col(m - 1) = x.segment(n, n);
    adj.r.col(m - 1) = x.segment(2 * n, n);
  }
  return adj;
}

}  // namespace chsc
