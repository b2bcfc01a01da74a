#include "chsc/optimality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chsc/sampling.hpp"
#include "chsc/state_solver.hpp"

namespace chsc {

BandReport sparsity_bands(const GridSpec& grid, const TimeGrid& tg, const Control& u,
                          const AdjointTrajectory& adj, const CostParams& cost,
                          scalar_t band_tol) {
  BandReport rep;
  rep.band_tol = band_tol;
  const index_t n = grid.nodes();
  index_t zeros1 = 0, zeros2 = 0, agree1 = 0, agree2 = 0;
  for (int m = 1; m <= tg.steps; ++m) {
    for (index_t i = 0; i < n; ++i) {
      const scalar_t a1 = std::abs(cost.h_field(i, m - 1) * adj.p(i, m - 1));
      const scalar_t a2 = std::abs(adj.r(i, m - 1));
      rep.sup_hp = std::max(rep.sup_hp, a1);
      rep.sup_r = std::max(rep.sup_r, a2);
      const bool z1 = (u.u1(i, m - 1) == 0.0);
      const bool z2 = (u.u2(i, m - 1) == 0.0);
      if (z1) ++zeros1;
      if (z2) ++zeros2;
      if (std::abs(a1 - cost.kappa) <= band_tol * cost.kappa) {
        ++rep.deadband1;
      } else {
        ++rep.checked1;
        if (z1 == (a1 <= cost.kappa)) {
          ++agree1;
        } else {
          rep.violations1.push_back(i + (m - 1) * n);
        }
      }
      if (std::abs(a2 - cost.kappa) <= band_tol * cost.kappa) {
        ++rep.deadband2;
      } else {
        ++rep.checked2;
        if (z2 == (a2 <= cost.kappa)) {
          ++agree2;
        } else {
          rep.violations2.push_back(i + (m - 1) * n);
        }
      }
    }
  }
  const scalar_t cells = static_cast<scalar_t>(n) * tg.steps;
  rep.zero_fraction1 = zeros1 / cells;
  rep.zero_fraction2 = zeros2 / cells;
  rep.agreement1 = (rep.checked1 > 0) ? static_cast<scalar_t>(agree1) / rep.checked1 : 1.0;
  rep.agreement2 = (rep.checked2 > 0) ? static_cast<scalar_t>(agree2) / rep.checked2 : 1.0;
  return rep;
}

ProjectionReport projection_residual(const GridSpec& grid, const TimeGrid& tg, const Control& u,
                                     const AdjointTrajectory& adj, const MultiplierPair& lam,
                                     const CostParams& cost) {
  const index_t n = grid.nodes();
  Control proj = zero_control(grid, tg);
  for (int m = 1; m <= tg.steps; ++m) {
    for (index_t i = 0; i < n; ++i) {
      const scalar_t s1 = -cost.h_field(i, m - 1) * adj.p(i, m - 1);
      const scalar_t s2 = adj.r(i, m - 1);
      proj.u1(i, m - 1) =
          std::clamp(-(s1 + cost.kappa * lam.l1(i, m - 1)) / cost.b3, cost.lo1, cost.hi1);
      proj.u2(i, m - 1) =
          std::clamp(-(s2 + cost.kappa * lam.l2(i, m - 1)) / cost.b3, cost.lo2, cost.hi2);
    }
  }
  ProjectionReport rep;
  slab_t diff1 = u.u1 - proj.u1;
  slab_t diff2 = u.u2 - proj.u2;
  rep.residual1 = std::sqrt(inner_q_cells(grid, diff1, diff1, tg.dt));
  rep.residual2 = std::sqrt(inner_q_cells(grid, diff2, diff2, tg.dt));
  return rep;
}

ConeClassification classify_cone(const GridSpec& grid, const TimeGrid& tg, const Control& u,
                                 const AdjointTrajectory& adj, const CostParams& cost,
                                 scalar_t act_tol_scale) {
  ConeClassification cls;
  const index_t n = grid.nodes();
  const scalar_t bound_mag = std::max(std::max(std::abs(cost.lo1), std::abs(cost.hi1)),
                                      std::max(std::abs(cost.lo2), std::abs(cost.hi2)));
  cls.act_tol = act_tol_scale * (cost.kappa + cost.b3 * bound_mag);
  cls.c1.resize(n, tg.steps);
  cls.c2.resize(n, tg.steps);
  auto classify = [&](scalar_t s, scalar_t ui, scalar_t lo, scalar_t hi) -> ConeClass {
    const scalar_t g = s + cost.b3 * ui;
    if (std::abs(std::abs(g) - cost.kappa) > cls.act_tol) return ConeClass::ForcedZero;
    if (ui == lo) return ConeClass::NonNeg;
    if (ui == hi) return ConeClass::NonPos;
    if (ui == 0.0 && std::abs(s + cost.kappa) <= cls.act_tol) return ConeClass::NonNeg;
    if (ui == 0.0 && std::abs(s - cost.kappa) <= cls.act_tol) return ConeClass::NonPos;
    return ConeClass::Free;
  };
  for (int m = 1; m <= tg.steps; ++m) {
    for (index_t i = 0; i < n; ++i) {
      const ConeClass k1 =
          classify(-cost.h_field(i, m - 1) * adj.p(i, m - 1), u.u1(i, m - 1), cost.lo1, cost.hi1);
      const ConeClass k2 = classify(adj.r(i, m - 1), u.u2(i, m - 1), cost.lo2, cost.hi2);
      cls.c1(i, m - 1) = static_cast<std::int8_t>(k1);
      cls.c2(i, m - 1) = static_cast<std::int8_t>(k2);
      ++cls.count1[static_cast<int>(k1)];
      ++cls.count2[static_cast<int>(k2)];
    }
  }
  return cls;
}

CriticalDirections sample_critical_directions(const GridSpec& grid, const TimeGrid& tg,
                                              const ConeClassification& cls, int count,
                                              std::uint64_t seed) {
  CriticalDirections out;
  const index_t free_cells = cls.count1[1] + cls.count1[2] + cls.count1[3] + cls.count2[1] +
                             cls.count2[2] + cls.count2[3];
  if (free_cells == 0) {
    out.degenerate = true;
    return out;
  }
  rng_t rng(seed);
  auto fold = [](slab_t& w, const Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>& c) {
    for (index_t m = 0; m < w.cols(); ++m) {
      for (index_t i = 0; i < w.rows(); ++i) {
        switch (static_cast<ConeClass>(c(i, m))) {
          case ConeClass::ForcedZero:
            w(i, m) = 0.0;
            break;
          case ConeClass::NonNeg:
            w(i, m) = std::abs(w(i, m));
            break;
          case ConeClass::NonPos:
            w(i, m) = -std::abs(w(i, m));
            break;
          case ConeClass::Free:
            break;
        }
      }
    }
  };
  out.dirs.reserve(count);
  int attempts = 0;
  while (static_cast<int>(out.dirs.size()) < count && attempts < 100 * count) {
    ++attempts;
    Control v = gaussian_control(grid, tg, rng);
    fold(v.u1, cls.c1);
    fold(v.u2, cls.c2);
    const scalar_t nrm = control_norm(grid, tg.dt, v);
    if (nrm < 1e-14) continue;
    v.u1 /= nrm;
    v.u2 /= nrm;
    out.dirs.push_back(std::move(v));
  }
  if (out.dirs.empty()) out.degenerate = true;
  return out;
}

CoercivityReport coercivity_scan(const FrozenLinearization& fr, const AdjointTrajectory& adj,
                                 const std::vector<Control>& dirs) {
  CoercivityReport rep;
  rep.count = static_cast<int>(dirs.size());
  rep.quotients.reserve(dirs.size());
  const GridSpec& grid = fr.grid();
  const scalar_t dt = fr.time_grid().dt;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const Control& v = dirs[k];
    const LinTrajectory lv = solve_linearized(fr, v);
    const scalar_t q = hessian_form(fr, adj, lv, lv, v, v);
    const scalar_t quotient = q / control_inner(grid, dt, v, v);
    rep.quotients.push_back(quotient);
    if (rep.min_index < 0 || quotient < rep.min_quotient) {
      rep.min_quotient = quotient;
      rep.min_index = static_cast<int>(k);
      rep.witness = v;
    }
  }
  if (!rep.quotients.empty()) {
    std::vector<scalar_t> sorted = rep.quotients;
    std::sort(sorted.begin(), sorted.end());
    rep.median_quotient = sorted[sorted.size() / 2];
  }
  return rep;
}

GrowthReport growth_probe(const GridSpec& grid, const TimeGrid& tg, const ModelParams& mp,
                          const CostParams& cost, const InitialData& init, const Control& u_star,
                          scalar_t j_star, scalar_t eps, int count, std::uint64_t seed,
                          const SolverOptions& opts) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("growth_probe: eps must be positive");
  }
  GrowthReport rep;
  rep.eps = eps;
  rng_t rng(seed);
  rep.gaps.reserve(count);
  int produced = 0;
  int attempts = 0;
  while (produced < count && attempts < 100 * count) {
    ++attempts;
    const Control draw = uniform_box_control(grid, tg, cost, rng);
    Control delta;
    delta.u1 = draw.u1 - u_star.u1;
    delta.u2 = draw.u2 - u_star.u2;
    const scalar_t dist = control_norm(grid, tg.dt, delta);
    if (dist < eps) continue;  // need a convex combination to stay feasible
    const scalar_t scale = eps / dist;
    Control probe;
    probe.u1 = u_star.u1 + scale * delta.u1;
    probe.u2 = u_star.u2 + scale * delta.u2;
    const StateSolveResult st = solve_state(grid, tg, mp, cost, probe, init, nullptr, opts);
    const scalar_t j = eval_total(grid, tg, cost, st.traj, probe);
    const scalar_t gap = (j - j_star) / (eps * eps);
    rep.gaps.push_back(gap);
    if (gap < 0.0) ++rep.negative_count;
    ++produced;
  }
  rep.count = produced;
  if (!rep.gaps.empty()) {
    std::vector<scalar_t> sorted = rep.gaps;
    std::sort(sorted.begin(), sorted.end());
    rep.min_gap = sorted.front();
    rep.median_gap = sorted[sorted.size() / 2];
  }
  return rep;
}

ViReport variational_inequality_check(const GridSpec& grid, const TimeGrid& tg, const Control& u,
                                      const GradientPair& grad, const MultiplierPair& lam,
                                      const CostParams& cost, int count, std::uint64_t seed) {
  ViReport rep;
  rep.count = count;
  rng_t rng(seed);
  bool first = true;
  for (int k = 0; k < count; ++k) {
    const Control v = uniform_box_control(grid, tg, cost, rng);
    Control diff;
    diff.u1 = v.u1 - u.u1;
    diff.u2 = v.u2 - u.u2;
    const scalar_t dist = control_norm(grid, tg.dt, diff);
    if (dist < 1e-300) continue;
    Control kkt;
    kkt.u1 = grad.d1 + cost.kappa * lam.l1;
    kkt.u2 = grad.d2 + cost.kappa * lam.l2;
    const scalar_t slack = control_inner(grid, tg.dt, kkt, diff) / dist;
    if (first || slack < rep.min_normalized_slack) {
      rep.min_normalized_slack = slack;
      first = false;
    }
  }
  return rep;
}

MultiplierReport check_multipliers(const Control& u, const MultiplierPair& lam) {
  MultiplierReport rep;
  auto scan = [&](const slab_t& uc, const slab_t& lc) {
    for (index_t m = 0; m < uc.cols(); ++m) {
      for (index_t i = 0; i < uc.rows(); ++i) {
        const scalar_t ui = uc(i, m);
        const scalar_t li = lc(i, m);
        if (ui != 0.0) {
          if (li != (ui > 0.0 ? 1.0 : -1.0)) ++rep.support_mismatches;
        } else {
          rep.max_box_excess = std::max(rep.max_box_excess, std::abs(li) - 1.0);
        }
      }
    }
  };
  scan(u.u1, lam.l1);
  scan(u.u2, lam.l2);
  rep.max_box_excess = std::max(rep.max_box_excess, 0.0);
  rep.exact = (rep.support_mismatches == 0) && (rep.max_box_excess <= 0.0);
  return rep;
}

}  // namespace chsc
