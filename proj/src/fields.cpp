#include "chsc/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chsc {

TimeGrid build_time_grid(scalar_t t_final, int steps) {
  if (!(t_final > 0.0)) {
    throw std::invalid_argument("build_time_grid: t_final must be positive");
  }
  if (steps < 1) {
    throw std::invalid_argument("build_time_grid: steps must be >= 1");
  }
  TimeGrid tg;
  tg.t_final = t_final;
  tg.steps = steps;
  tg.dt = t_final / static_cast<scalar_t>(steps);
  return tg;
}

Control zero_control(const GridSpec& grid, const TimeGrid& tg) {
  Control u;
  u.u1 = slab_t::Zero(grid.nodes(), tg.steps);
  u.u2 = slab_t::Zero(grid.nodes(), tg.steps);
  return u;
}

index_t clamp_to_box(Control& u, const CostParams& cost) {
  index_t moved = 0;
  auto clamp_one = [&moved](slab_t& w, scalar_t lo, scalar_t hi) {
    for (index_t c = 0; c < w.cols(); ++c) {
      for (index_t i = 0; i < w.rows(); ++i) {
        scalar_t& v = w(i, c);
        if (v < lo) {
          v = lo;
          ++moved;
        } else if (v > hi) {
          v = hi;
          ++moved;
        }
      }
    }
  };
  clamp_one(u.u1, cost.lo1, cost.hi1);
  clamp_one(u.u2, cost.lo2, cost.hi2);
  return moved;
}

bool inside_box(const Control& u, const CostParams& cost) {
  return (u.u1.array() >= cost.lo1).all() && (u.u1.array() <= cost.hi1).all() &&
         (u.u2.array() >= cost.lo2).all() && (u.u2.array() <= cost.hi2).all();
}

scalar_t control_inner(const GridSpec& grid, scalar_t dt, const Control& a, const Control& b) {
  return inner_q_cells(grid, a.u1, b.u1, dt) + inner_q_cells(grid, a.u2, b.u2, dt);
}

scalar_t control_norm(const GridSpec& grid, scalar_t dt, const Control& a) {
  return std::sqrt(control_inner(grid, dt, a, a));
}

scalar_t state_distance(const GridSpec& grid, scalar_t dt, const StateTrajectory& a,
                        const StateTrajectory& b) {
  auto norm_q = [&](const slab_t& x, const slab_t& y) {
    slab_t d = x - y;
    return std::sqrt(inner_l2_q(grid, d, d, dt));
  };
  return norm_q(a.mu, b.mu) + norm_q(a.phi, b.phi) + norm_q(a.sigma, b.sigma);
}

scalar_t adjoint_distance(const GridSpec& grid, scalar_t dt, const AdjointTrajectory& a,
                          const AdjointTrajectory& b) {
  auto norm_q = [&](const slab_t& x, const slab_t& y) {
    slab_t d = x - y;
    return std::sqrt(inner_l2_q(grid, d, d, dt));
  };
  return norm_q(a.p, b.p) + norm_q(a.q, b.q) + norm_q(a.r, b.r);
}

}  // namespace chsc
