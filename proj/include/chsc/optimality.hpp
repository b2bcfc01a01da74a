#pragma once

#include <cstdint>
#include <vector>

#include "chsc/fields.hpp"
#include "chsc/objective.hpp"
#include "chsc/sensitivity.hpp"

namespace chsc {

/// Support / dual-band structure of one converged control. Cells whose
/// adjoint magnitude lies within band_tol * kappa of the threshold are
/// excluded from the equivalence count (dead band).
struct BandReport {
  scalar_t band_tol = 1e-4;
  scalar_t zero_fraction1 = 0.0, zero_fraction2 = 0.0;
  index_t deadband1 = 0, deadband2 = 0;
  index_t checked1 = 0, checked2 = 0;
  scalar_t agreement1 = 1.0, agreement2 = 1.0;  ///< fraction of checked cells consistent
  std::vector<index_t> violations1, violations2;  ///< flat cell ids, node + m * nodes
  scalar_t sup_hp = 0.0, sup_r = 0.0;  ///< sup norms of the adjoint quantities
};

/// Checks the support characterization: u1 = 0 exactly where |h p| <= kappa
/// and u2 = 0 exactly where |r| <= kappa (adjoint column m-1 against control
/// cell m).
BandReport sparsity_bands(const GridSpec& grid, const TimeGrid& tg, const Control& u,
                          const AdjointTrajectory& adj, const CostParams& cost,
                          scalar_t band_tol = 1e-4);

struct ProjectionReport {
  scalar_t residual1 = 0.0, residual2 = 0.0;  ///< control-space norms
};

/// Distance of u from the fixed-point projection formula
///   u1 = clamp(-(-h p + kappa lam1)/b3),  u2 = clamp(-(r + kappa lam2)/b3).
ProjectionReport projection_residual(const GridSpec& grid, const TimeGrid& tg, const Control& u,
                                     const AdjointTrajectory& adj, const MultiplierPair& lam,
                                     const CostParams& cost);

enum class ConeClass : std::int8_t { ForcedZero = 0, NonNeg = 1, NonPos = 2, Free = 3 };

struct ConeClassification {
  Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> c1, c2;
  scalar_t act_tol = 0.0;
  index_t count1[4] = {0, 0, 0, 0};
  index_t count2[4] = {0, 0, 0, 0};
};

/// Pointwise critical-cone classes at (u, adjoint). act_tol defaults to
/// act_tol_scale * (kappa + b3 * max bound magnitude). Bound and zero
/// activity are detected by exact equality (the prox produces exact values).
ConeClassification classify_cone(const GridSpec& grid, const TimeGrid& tg, const Control& u,
                                 const AdjointTrajectory& adj, const CostParams& cost,
                                 scalar_t act_tol_scale = 1e-6);

struct CriticalDirections {
  std::vector<Control> dirs;
  bool degenerate = false;  ///< cone is {0}: nothing to sample
};

/// Seeded Gaussian directions folded into the cone (zeroed, sign-projected)
/// and normalized to unit control norm.
CriticalDirections sample_critical_directions(const GridSpec& grid, const TimeGrid& tg,
                                              const ConeClassification& cls, int count,
                                              std::uint64_t seed);

struct CoercivityReport {
  int count = 0;
  scalar_t min_quotient = 0.0;
  scalar_t median_quotient = 0.0;
  std::vector<scalar_t> quotients;
  int min_index = -1;
  Control witness;  ///< direction attaining the minimum
};

/// Rayleigh quotients of the reduced second derivative over the given
/// directions (one linearized solve each).
CoercivityReport coercivity_scan(const FrozenLinearization& fr, const AdjointTrajectory& adj,
                                 const std::vector<Control>& dirs);

struct GrowthReport {
  int count = 0;
  scalar_t eps = 0.0;
  scalar_t min_gap = 0.0;
  scalar_t median_gap = 0.0;
  int negative_count = 0;
  std::vector<scalar_t> gaps;
};

/// Samples feasible controls at distance eps from u_star and reports the
/// normalized objective gaps (J(u) - j_star) / eps^2. Every probe is a convex
/// combination of u_star and a box draw, hence feasible.
GrowthReport growth_probe(const GridSpec& grid, const TimeGrid& tg, const ModelParams& mp,
                          const CostParams& cost, const InitialData& init, const Control& u_star,
                          scalar_t j_star, scalar_t eps, int count, std::uint64_t seed,
                          const SolverOptions& opts = {});

struct ViReport {
  int count = 0;
  scalar_t min_normalized_slack = 0.0;
};

/// First-order variational inequality against random feasible competitors:
///   (d1 + kappa lam1, v1 - u1) + (d2 + kappa lam2, v2 - u2) >= 0,
/// reported normalized by |v - u|.
ViReport variational_inequality_check(const GridSpec& grid, const TimeGrid& tg, const Control& u,
                                      const GradientPair& grad, const MultiplierPair& lam,
                                      const CostParams& cost, int count, std::uint64_t seed);

struct MultiplierReport {
  bool exact = true;
  index_t support_mismatches = 0;   ///< cells with u != 0 where lam != sign(u)
  scalar_t max_box_excess = 0.0;    ///< worst |lam| - 1 over zero cells
};

/// Verifies the subdifferential characterization of recovered multipliers.
MultiplierReport check_multipliers(const Control& u, const MultiplierPair& lam);

}  // namespace chsc
