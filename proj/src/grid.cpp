#include "chsc/grid.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace chsc {

GridSpec build_grid(int dim, std::array<scalar_t, 2> extents, std::array<int, 2> counts) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("build_grid: dim must be 1 or 2, got " + std::to_string(dim));
  }
  GridSpec g;
  g.dim = dim;
  g.extents = extents;
  g.counts = counts;
  if (dim == 1) {
    g.counts[1] = 1;
    g.extents[1] = 1.0;
  }
  for (int a = 0; a < dim; ++a) {
    if (g.counts[a] < 3) {
      throw std::invalid_argument("build_grid: axis " + std::to_string(a) +
                                  " needs at least 3 nodes, got " + std::to_string(g.counts[a]));
    }
    if (!(g.extents[a] > 0.0)) {
      throw std::invalid_argument("build_grid: axis " + std::to_string(a) +
                                  " extent must be positive");
    }
    g.spacing[a] = g.extents[a] / static_cast<scalar_t>(g.counts[a] - 1);
  }
  if (dim == 1) g.spacing[1] = 1.0;

  const int nx = g.counts[0];
  const int ny = g.counts[1];
  auto axis_weight = [](int i, int n, scalar_t h) {
    return (i == 0 || i == n - 1) ? 0.5 * h : h;
  };
  g.weights.resize(static_cast<index_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    const scalar_t wy = (dim == 2) ? axis_weight(iy, ny, g.spacing[1]) : 1.0;
    for (int ix = 0; ix < nx; ++ix) {
      g.weights[static_cast<index_t>(iy) * nx + ix] = wy * axis_weight(ix, nx, g.spacing[0]);
    }
  }
  return g;
}

field_t node_coords(const GridSpec& grid, int axis) {
  if (axis < 0 || axis >= grid.dim) {
    throw std::invalid_argument("node_coords: axis out of range");
  }
  const int nx = grid.counts[0];
  const int ny = grid.counts[1];
  field_t c(grid.nodes());
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int i = (axis == 0) ? ix : iy;
      c[static_cast<index_t>(iy) * nx + ix] = grid.spacing[axis] * i;
    }
  }
  return c;
}

field_t laplacian_neumann(const GridSpec& grid, const field_t& f) {
  if (f.size() != grid.nodes()) {
    throw std::invalid_argument("laplacian_neumann: field size does not match grid");
  }
  const int nx = grid.counts[0];
  const int ny = grid.counts[1];
  const scalar_t ihx2 = 1.0 / (grid.spacing[0] * grid.spacing[0]);
  field_t out = field_t::Zero(f.size());
  for (int iy = 0; iy < ny; ++iy) {
    const index_t row = static_cast<index_t>(iy) * nx;
    for (int ix = 0; ix < nx; ++ix) {
      const scalar_t left = f[row + (ix == 0 ? 1 : ix - 1)];
      const scalar_t right = f[row + (ix == nx - 1 ? nx - 2 : ix + 1)];
      out[row + ix] += (left - 2.0 * f[row + ix] + right) * ihx2;
    }
  }
  if (grid.dim == 2) {
    const scalar_t ihy2 = 1.0 / (grid.spacing[1] * grid.spacing[1]);
    for (int iy = 0; iy < ny; ++iy) {
      const int lo = (iy == 0 ? 1 : iy - 1);
      const int hi = (iy == ny - 1 ? ny - 2 : iy + 1);
      for (int ix = 0; ix < nx; ++ix) {
        const scalar_t down = f[static_cast<index_t>(lo) * nx + ix];
        const scalar_t up = f[static_cast<index_t>(hi) * nx + ix];
        const scalar_t mid = f[static_cast<index_t>(iy) * nx + ix];
        out[static_cast<index_t>(iy) * nx + ix] += (down - 2.0 * mid + up) * ihy2;
      }
    }
  }
  return out;
}

sparse_t neumann_laplacian_matrix(const GridSpec& grid) {
  const int nx = grid.counts[0];
  const int ny = grid.counts[1];
  const index_t n = grid.nodes();
  std::vector<triplet_t> trips;
  trips.reserve(static_cast<std::size_t>(n) * (grid.dim == 1 ? 3 : 5));
  const scalar_t ihx2 = 1.0 / (grid.spacing[0] * grid.spacing[0]);
  const scalar_t ihy2 = 1.0 / (grid.spacing[1] * grid.spacing[1]);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const index_t i = static_cast<index_t>(iy) * nx + ix;
      scalar_t diag = -2.0 * ihx2;
      if (ix == 0) {
        trips.emplace_back(i, i + 1, 2.0 * ihx2);
      } else if (ix == nx - 1) {
        trips.emplace_back(i, i - 1, 2.0 * ihx2);
      } else {
        trips.emplace_back(i, i - 1, ihx2);
        trips.emplace_back(i, i + 1, ihx2);
      }
      if (grid.dim == 2) {
        diag += -2.0 * ihy2;
        if (iy == 0) {
          trips.emplace_back(i, i + nx, 2.0 * ihy2);
        } else if (iy == ny - 1) {
          trips.emplace_back(i, i - nx, 2.0 * ihy2);
        } else {
          trips.emplace_back(i, i - nx, ihy2);
          trips.emplace_back(i, i + nx, ihy2);
        }
      }
      trips.emplace_back(i, i, diag);
    }
  }
  sparse_t lap(n, n);
  lap.setFromTriplets(trips.begin(), trips.end());
  lap.makeCompressed();
  return lap;
}

scalar_t integrate_omega(const GridSpec& grid, const field_t& f) {
  if (f.size() != grid.nodes()) {
    throw std::invalid_argument("integrate_omega: field size does not match grid");
  }
  return (grid.weights * f).sum();
}

scalar_t inner_omega(const GridSpec& grid, const field_t& a, const field_t& b) {
  if (a.size() != grid.nodes() || b.size() != grid.nodes()) {
    throw std::invalid_argument("inner_omega: field size does not match grid");
  }
  return (grid.weights * a * b).sum();
}

namespace {

scalar_t inner_q_impl(const GridSpec& grid, const slab_t& a, const slab_t& b, scalar_t dt,
                      bool trapezoid_in_time, const char* who) {
  if (a.rows() != grid.nodes() || b.rows() != grid.nodes()) {
    throw std::invalid_argument(std::string(who) + ": row count does not match grid");
  }
  if (a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(who) + ": slice counts differ");
  }
  if (a.cols() < (trapezoid_in_time ? 2 : 1)) {
    throw std::invalid_argument(std::string(who) + ": too few time slices");
  }
  scalar_t total = 0.0;
  const index_t s = a.cols();
  for (index_t m = 0; m < s; ++m) {
    scalar_t w = dt;
    if (trapezoid_in_time && (m == 0 || m == s - 1)) w = 0.5 * dt;
    total += w * (grid.weights * a.col(m).array() * b.col(m).array()).sum();
  }
  return total;
}

}  // namespace

scalar_t inner_l2_q(const GridSpec& grid, const slab_t& a, const slab_t& b, scalar_t dt) {
  return inner_q_impl(grid, a, b, dt, true, "inner_l2_q");
}

scalar_t inner_q_cells(const GridSpec& grid, const slab_t& a, const slab_t& b, scalar_t dt) {
  return inner_q_impl(grid, a, b, dt, false, "inner_q_cells");
}

}  // namespace chsc
