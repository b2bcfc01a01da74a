#pragma once

#include <random>

#include "chsc/fields.hpp"

namespace chsc {

using rng_t = std::mt19937_64;

/// Independent standard normal entries in every control cell.
Control gaussian_control(const GridSpec& grid, const TimeGrid& tg, rng_t& rng);

/// Uniform draw from the admissible box, cell by cell.
Control uniform_box_control(const GridSpec& grid, const TimeGrid& tg, const CostParams& cost,
                            rng_t& rng);

/// Scales a control pair to unit norm in the control space; throws
/// std::invalid_argument on (numerically) zero input.
Control normalize_control(const GridSpec& grid, scalar_t dt, Control u);

}  // namespace chsc
