#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chsc/fields.hpp"
#include "chsc/model.hpp"
#include "chsc/state_solver.hpp"

namespace chsc {

/// Outcome of one verification check. `values` and `labels` run in parallel;
/// `digest` is a hash of the inputs so reruns are comparable byte for byte.
struct CheckReport {
  std::string name;
  bool pass = false;
  scalar_t tolerance = 0.0;
  std::vector<std::string> labels;
  std::vector<scalar_t> values;
  std::string digest;
  std::string note;
};

/// Problem bundle the finite-difference checks operate on.
struct DiagnosticProblem {
  GridSpec grid;
  TimeGrid tg;
  ModelParams mp;
  CostParams cost;
  InitialData init;
  Control u;
  SolverOptions opts;
};

struct FdCheckOptions {
  int dirs = 5;
  std::vector<scalar_t> eps_list = {1e-2, 1e-3, 1e-4, 1e-5};
  scalar_t pass_eps = 1e-4;  ///< tolerance applies at this step size
  scalar_t tol = 1e-3;
  std::uint64_t seed = 1;
};

/// Central differences of the reduced smooth cost against the adjoint
/// gradient over random unit directions; pass needs the documented accuracy
/// at pass_eps and an initially decreasing error trend.
CheckReport gradient_check(const DiagnosticProblem& prob, const FdCheckOptions& opts = {});

struct DualityOptions {
  int dirs = 5;
  scalar_t tol = 1e-6;
  std::uint64_t seed = 2;
};

/// Linearized-route directional derivative against the gradient pairing.
CheckReport duality_check(const DiagnosticProblem& prob, const DualityOptions& opts = {});

struct HessianCheckOptions {
  int dirs = 3;
  scalar_t eps = 1e-3;
  scalar_t tol_sym = 1e-10;
  scalar_t tol_cross = 1e-4;
  scalar_t tol_fd = 1e-2;
  std::uint64_t seed = 3;
};

/// Symmetry, route agreement (adjoint formula vs bilinearized), and second
/// central differences of the reduced second derivative.
CheckReport hessian_check(const DiagnosticProblem& prob, const HessianCheckOptions& opts = {});

struct ContinuityOptions {
  std::vector<scalar_t> deltas = {0.32, 0.16, 0.08, 0.04, 0.02};
  scalar_t ratio_band = 2.0;  ///< allowed spread of distance/delta quotients
  scalar_t slack = 1.05;      ///< monotonicity slack factor
  std::uint64_t seed = 4;
};

/// Continuity/Lipschitz trend of the control-to-state map, the adjoint, and
/// the directional derivative under shrinking control perturbations.
CheckReport continuity_check(const DiagnosticProblem& prob, const ContinuityOptions& opts = {});

struct MmsOptions {
  int dim = 1;
  scalar_t extent_x = 1.0, extent_y = 1.0;
  scalar_t t_final = 1.0;
  /// phase amplitude profile a(t) = base + amp * sin(rate * t)
  scalar_t base = 0.3, amp = 0.15, rate = 2.0;
  int temporal_nodes = 129;
  std::vector<int> temporal_steps = {8, 16, 32};
  int spatial_steps = 2048;
  std::vector<int> spatial_nodes = {9, 17, 33};
  scalar_t order_t_target = 1.0, order_t_tol = 0.2;
  scalar_t order_x_target = 2.0, order_x_tol = 0.3;
  ModelParams mp;
  SolverOptions solver;
};

struct MmsReport {
  std::vector<scalar_t> dts, dt_errors;
  std::vector<scalar_t> hs, h_errors;
  scalar_t temporal_order = 0.0;
  scalar_t spatial_order = 0.0;
  CheckReport check;
};

/// Manufactured-solution study: mu = sigma = 0, phi = a(t) cos(pi x / Lx)
/// (times cos(pi y / Ly) in 2D), forcing from the closed-form residual.
/// Separate refinement sweeps fit the temporal and spatial orders.
MmsReport mms_convergence(const MmsOptions& opts = {});

/// FNV-1a hash of a canonical input description, hex-encoded.
std::string input_digest(const std::string& canonical);

}  // namespace chsc
