#pragma once

#include <memory>

#include "chsc/fields.hpp"
#include "chsc/model.hpp"
#include "chsc/state_solver.hpp"

namespace chsc {

/// Coefficients, step operators, and factorizations frozen at a solved state
/// trajectory. All sensitivity systems (linearized, bilinearized, adjoint)
/// share these; coefficients live at the implicit nodes m = 1..steps.
///
/// The backward operator is the quadrature-weighted transpose of the forward
/// one, which makes the discrete pairing of linearized solutions with the
/// adjoint reproduce the reduced gradient up to inner-solver precision.
class FrozenLinearization {
 public:
  FrozenLinearization(const GridSpec& grid, const TimeGrid& tg, const ModelParams& mp,
                      const CostParams& cost, const StateTrajectory& frozen,
                      const SolverOptions& opts = {});
  ~FrozenLinearization();
  FrozenLinearization(FrozenLinearization&&) noexcept;
  FrozenLinearization& operator=(FrozenLinearization&&) noexcept;
  FrozenLinearization(const FrozenLinearization&) = delete;
  FrozenLinearization& operator=(const FrozenLinearization&) = delete;

  const GridSpec& grid() const;
  const TimeGrid& time_grid() const;
  const ModelParams& model() const;
  const CostParams& cost() const;
  const StateTrajectory& state() const;

  /// Frozen nodal coefficients of step m (1-based).
  const field_t& coeff_P(int m) const;    ///< P(phi*)
  const field_t& coeff_Pp(int m) const;   ///< P'(phi*)
  const field_t& coeff_Ppp(int m) const;  ///< P''(phi*)
  const field_t& coeff_c(int m) const;    ///< sigma* + chi (1 - phi*) - mu*
  const field_t& coeff_F3(int m) const;   ///< F'''(phi*)

  /// Step operators (assembled on first use and cached).
  const sparse_t& forward_matrix(int m) const;
  const sparse_t& adjoint_matrix(int m) const;

  vector_t solve_forward_step(int m, const vector_t& rhs) const;
  vector_t solve_adjoint_step(int m, const vector_t& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Solves the generalized linear system with gate flags. flags.l2 requires h,
/// flags.l3 requires f, flags.l4 requires init. Column 0 of the result holds
/// the (gated) initial data.
LinTrajectory solve_generalized(const FrozenLinearization& fr, const GenFlags& flags,
                                const Control* h, const SourceTriple* f, const InitialData* init);

/// Directional state derivative: flags {1,1,0,0}.
LinTrajectory solve_linearized(const FrozenLinearization& fr, const Control& h);

/// Second-derivative sources built from two linearized solutions; column m-1
/// samples the implicit node of step m.
SourceTriple bilinear_sources(const FrozenLinearization& fr, const LinTrajectory& lh,
                              const LinTrajectory& lk);

/// Second directional state derivative: flags {1,0,1,0} with the sources
/// above. Symmetric in (h, k).
LinTrajectory solve_bilinearized(const FrozenLinearization& fr, const LinTrajectory& lh,
                                 const LinTrajectory& lk);
LinTrajectory solve_bilinearized(const FrozenLinearization& fr, const Control& h,
                                 const Control& k);

/// Backward sweep of the adjoint system. Column `steps` carries the exact
/// terminal data, column m-1 the multiplier of forward step m.
AdjointTrajectory solve_adjoint(const FrozenLinearization& fr);

}  // namespace chsc
