#pragma once

#include <array>

#include "chsc/types.hpp"

namespace chsc {

/// Uniform node-centered tensor grid on [0,Lx] (x [0,Ly] in 2D).
/// Nodes include both endpoints; 2D node ordering is x-fastest,
/// idx = iy * counts[0] + ix.
struct GridSpec {
  int dim = 1;
  std::array<scalar_t, 2> extents{1.0, 1.0};
  std::array<int, 2> counts{2, 1};
  std::array<scalar_t, 2> spacing{1.0, 1.0};
  /// Trapezoidal quadrature weight per node (tensor product of 1D weights).
  field_t weights;

  index_t nodes() const { return weights.size(); }
};

/// Builds a grid description. dim must be 1 or 2, every active axis needs
/// at least 3 nodes and a positive extent.
GridSpec build_grid(int dim, std::array<scalar_t, 2> extents, std::array<int, 2> counts);

/// Coordinate of every node along the given axis (axis 0 = x, 1 = y).
field_t node_coords(const GridSpec& grid, int axis);

/// Five-point (three-point in 1D) Laplacian with mirror ghost nodes, i.e.
/// homogeneous Neumann closure: the boundary stencil doubles the inward
/// neighbor. Self-adjoint under the trapezoidal pairing.
field_t laplacian_neumann(const GridSpec& grid, const field_t& f);

/// Sparse matrix of laplacian_neumann; rows act on nodal vectors.
sparse_t neumann_laplacian_matrix(const GridSpec& grid);

/// Trapezoidal quadrature of f over the domain.
scalar_t integrate_omega(const GridSpec& grid, const field_t& f);

/// Trapezoidal spatial inner product of two nodal fields.
scalar_t inner_omega(const GridSpec& grid, const field_t& a, const field_t& b);

/// Space-time inner product of two node-by-slice sample matrices using the
/// trapezoid rule in time (weights dt/2 at the first and last slice) and in
/// space. Column counts must match and be >= 2.
scalar_t inner_l2_q(const GridSpec& grid, const slab_t& a, const slab_t& b, scalar_t dt);

/// Space-time inner product for cell samples (piecewise-constant in time):
/// plain dt-weighted sum over all columns, trapezoid in space.
scalar_t inner_q_cells(const GridSpec& grid, const slab_t& a, const slab_t& b, scalar_t dt);

}  // namespace chsc
