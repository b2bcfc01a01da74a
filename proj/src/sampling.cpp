#include "chsc/sampling.hpp"

#include <stdexcept>

namespace chsc {

Control gaussian_control(const GridSpec& grid, const TimeGrid& tg, rng_t& rng) {
  std::normal_distribution<scalar_t> normal(0.0, 1.0);
  Control u = zero_control(grid, tg);
  for (index_t m = 0; m < u.u1.cols(); ++m) {
    for (index_t i = 0; i < u.u1.rows(); ++i) u.u1(i, m) = normal(rng);
  }
  for (index_t m = 0; m < u.u2.cols(); ++m) {
    for (index_t i = 0; i < u.u2.rows(); ++i) u.u2(i, m) = normal(rng);
  }
  return u;
}

Control uniform_box_control(const GridSpec& grid, const TimeGrid& tg, const CostParams& cost,
                            rng_t& rng) {
  std::uniform_real_distribution<scalar_t> d1(cost.lo1, cost.hi1);
  std::uniform_real_distribution<scalar_t> d2(cost.lo2, cost.hi2);
  Control u = zero_control(grid, tg);
  for (index_t m = 0; m < u.u1.cols(); ++m) {
    for (index_t i = 0; i < u.u1.rows(); ++i) u.u1(i, m) = d1(rng);
  }
  for (index_t m = 0; m < u.u2.cols(); ++m) {
    for (index_t i = 0; i < u.u2.rows(); ++i) u.u2(i, m) = d2(rng);
  }
  return u;
}

Control normalize_control(const GridSpec& grid, scalar_t dt, Control u) {
  const scalar_t nrm = control_norm(grid, dt, u);
  if (!(nrm > 1e-300)) {
    throw std::invalid_argument("normalize_control: zero direction");
  }
  u.u1 /= nrm;
  u.u2 /= nrm;
  return u;
}

}  // namespace chsc
