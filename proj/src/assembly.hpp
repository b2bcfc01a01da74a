#pragma once

// Internal: sparse assembly of the 3n x 3n implicit-step operators.
// Unknown ordering is [mu; phi; sigma] for the forward/generalized system and
// [p; q; r] for the backward system. The backward matrix is the trapezoid-
// weighted transpose of the forward one, written out in PDE form (the
// Neumann Laplacian satisfies W L = L^T W for the diagonal quadrature W, so
// conjugation leaves every block in stencil form).

#include <vector>

#include "chsc/fields.hpp"
#include "chsc/grid.hpp"
#include "chsc/model.hpp"
#include "chsc/types.hpp"

namespace chsc {

/// Frozen nodal coefficients of one implicit step.
struct StepCoeffs {
  field_t P;    ///< P(phi)
  field_t Ppc;  ///< P'(phi) * (sigma + chi (1 - phi) - mu)
  field_t Fpp;  ///< F''(phi)
};

namespace detail {

inline void add_block(std::vector<triplet_t>& trips, index_t row0, index_t col0,
                      const sparse_t& mat, scalar_t scale) {
  for (int k = 0; k < mat.outerSize(); ++k) {
    for (sparse_t::InnerIterator it(mat, k); it; ++it) {
      trips.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
    }
  }
}

inline void add_diag(std::vector<triplet_t>& trips, index_t row0, index_t col0,
                     const field_t& d) {
  for (index_t i = 0; i < d.size(); ++i) trips.emplace_back(row0 + i, col0 + i, d[i]);
}

inline void add_identity(std::vector<triplet_t>& trips, index_t row0, index_t col0, index_t n,
                         scalar_t v) {
  for (index_t i = 0; i < n; ++i) trips.emplace_back(row0 + i, col0 + i, v);
}

}  // namespace detail

/// Jacobian of one implicit step (also the generalized step operator).
/// `couple` gates the frozen-state coupling terms.
inline sparse_t assemble_forward_step(const GridSpec& grid, const sparse_t& lap, scalar_t dt,
                                      const ModelParams& mp, const StepCoeffs& co, bool couple) {
  const index_t n = grid.nodes();
  std::vector<triplet_t> trips;
  trips.reserve(static_cast<std::size_t>(lap.nonZeros()) * 4 + 12 * static_cast<std::size_t>(n));
  using namespace detail;
  // row block 1: chemical-potential equation
  add_identity(trips, 0, 0, n, mp.alpha / dt);
  add_block(trips, 0, 0, lap, -1.0);
  add_identity(trips, 0, n, n, 1.0 / dt);
  // row block 2: phase equation
  add_identity(trips, n, 0, n, -1.0);
  add_identity(trips, n, n, n, mp.beta / dt);
  add_block(trips, n, n, lap, -1.0);
  // row block 3: nutrient equation
  add_block(trips, 2 * n, n, lap, mp.chi);
  add_identity(trips, 2 * n, 2 * n, n, 1.0 / dt);
  add_block(trips, 2 * n, 2 * n, lap, -1.0);
  if (couple) {
    add_diag(trips, 0, 0, co.P);
    add_diag(trips, 0, n, field_t(-co.Ppc + mp.chi * co.P));
    add_diag(trips, 0, 2 * n, field_t(-co.P));
    add_diag(trips, n, n, co.Fpp);
    add_identity(trips, n, 2 * n, n, -mp.chi);
    add_diag(trips, 2 * n, 0, field_t(-co.P));
    add_diag(trips, 2 * n, n, field_t(co.Ppc - mp.chi * co.P));
    add_diag(trips, 2 * n, 2 * n, co.P);
  }
  sparse_t a(3 * n, 3 * n);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

/// One backward step of the adjoint system (trapezoid-weighted transpose of
/// the coupled forward step).
inline sparse_t assemble_adjoint_step(const GridSpec& grid, const sparse_t& lap, scalar_t dt,
                                      const ModelParams& mp, const StepCoeffs& co) {
  const index_t n = grid.nodes();
  std::vector<triplet_t> trips;
  trips.reserve(static_cast<std::size_t>(lap.nonZeros()) * 4 + 12 * static_cast<std::size_t>(n));
  using namespace detail;
  // row block 1: pairing with the chemical-potential equation
  add_identity(trips, 0, 0, n, mp.alpha / dt);
  add_block(trips, 0, 0, lap, -1.0);
  add_diag(trips, 0, 0, co.P);
  add_identity(trips, 0, n, n, -1.0);
  add_diag(trips, 0, 2 * n, field_t(-co.P));
  // row block 2: pairing with the phase equation
  add_identity(trips, n, 0, n, 1.0 / dt);
  add_diag(trips, n, 0, field_t(-co.Ppc + mp.chi * co.P));
  add_identity(trips, n, n, n, mp.beta / dt);
  add_block(trips, n, n, lap, -1.0);
  add_diag(trips, n, n, co.Fpp);
  add_block(trips, n, 2 * n, lap, mp.chi);
  add_diag(trips, n, 2 * n, field_t(co.Ppc - mp.chi * co.P));
  // row block 3: pairing with the nutrient equation
  add_diag(trips, 2 * n, 0, field_t(-co.P));
  add_identity(trips, 2 * n, n, n, -mp.chi);
  add_identity(trips, 2 * n, 2 * n, n, 1.0 / dt);
  add_block(trips, 2 * n, 2 * n, lap, -1.0);
  add_diag(trips, 2 * n, 2 * n, co.P);
  sparse_t a(3 * n, 3 * n);
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

/// Coefficients evaluated at a nodal phase/state triple.
inline StepCoeffs make_step_coeffs(const ModelParams& mp, const field_t& mu, const field_t& phi,
                                   const field_t& sigma, ClampMonitor* monitor) {
  StepCoeffs co;
  const index_t n = phi.size();
  co.P.resize(n);
  co.Ppc.resize(n);
  co.Fpp.resize(n);
  for (index_t i = 0; i < n; ++i) {
    const scalar_t c = sigma[i] + mp.chi * (1.0 - phi[i]) - mu[i];
    co.P[i] = proliferation(mp, phi[i], 0);
    co.Ppc[i] = proliferation(mp, phi[i], 1) * c;
    co.Fpp[i] = potential(mp, phi[i], 2, monitor);
  }
  return co;
}

}  // namespace chsc
