#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace chsc {

using scalar_t = double;

/// Nodal values of a scalar field, one entry per grid node.
using field_t = Eigen::Array<scalar_t, Eigen::Dynamic, 1>;

/// Space-time sample matrix: rows are grid nodes, columns are time slices.
using slab_t = Eigen::Matrix<scalar_t, Eigen::Dynamic, Eigen::Dynamic>;

using vector_t = Eigen::Matrix<scalar_t, Eigen::Dynamic, 1>;
using sparse_t = Eigen::SparseMatrix<scalar_t>;
using triplet_t = Eigen::Triplet<scalar_t>;

using index_t = Eigen::Index;

}  // namespace chsc
