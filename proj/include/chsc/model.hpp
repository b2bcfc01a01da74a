#pragma once

#include <atomic>
#include <cstdint>

#include "chsc/types.hpp"

namespace chsc {

enum class ProliferationKind { Constant, LogisticSmooth };

/// Physical and constitutive parameters of the three-field model.
struct ModelParams {
  scalar_t alpha = 1.0;  ///< viscosity weight on the chemical-potential rate
  scalar_t beta = 1.0;   ///< viscosity weight on the phase rate
  scalar_t chi = 1.0;    ///< chemotaxis / active-transport coupling
  scalar_t f2_k = 1.0;   ///< concave well weight, F2(r) = k (1 - r^2)
  ProliferationKind p_kind = ProliferationKind::LogisticSmooth;
  scalar_t p0 = 0.1;  ///< proliferation scale (constant value or plateau)
  scalar_t p_s = 0.5; ///< smoothing width of the logistic profile
  scalar_t sep_eps = 1e-6;  ///< half-width of the safeguard band at +-1
};

/// Counts evaluations of the logarithmic potential whose argument had to be
/// pulled back into the safeguard band [-1+sep_eps, 1-sep_eps].
struct ClampMonitor {
  std::atomic<std::int64_t> count{0};
};

/// Logarithmic convex part of the double well,
///   F1(r) = (1+r) ln(1+r) + (1-r) ln(1-r),
/// and its derivatives; order in {0,1,2,3}:
///   F1'   = ln((1+r)/(1-r)),
///   F1''  = 2/(1-r^2),
///   F1''' = -(1+r)^-2 + (1-r)^-2.
/// Arguments outside the safeguard band are clamped to it first; a clamp
/// increments the monitor when one is given.
scalar_t f1_log(scalar_t r, int order, scalar_t sep_eps, ClampMonitor* monitor = nullptr);

/// Concave part F2(r) = k (1 - r^2) and derivatives, order in {0,1,2,3}.
scalar_t f2(scalar_t r, int order, scalar_t k);

/// Proliferation profile P and derivatives, order in {0,1,2}.
/// Constant: P = p0. LogisticSmooth: P(r) = p0 (1 + tanh(r/s)) / 2, which is
/// smooth, nonnegative and bounded by p0 with |P'| <= p0/(2 s).
scalar_t proliferation(const ModelParams& mp, scalar_t r, int order);

/// Full potential derivative F^(order) = F1^(order) + F2^(order), safeguarded.
scalar_t potential(const ModelParams& mp, scalar_t r, int order, ClampMonitor* monitor = nullptr);

}  // namespace chsc
