#pragma once

// Internal: linear solver for one implicit step. Direct sparse LU in 1D,
// BiCGSTAB with diagonal preconditioning in 2D (direct fallback when the
// Krylov iteration stalls).

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <memory>

#include "chsc/errors.hpp"
#include "chsc/types.hpp"

namespace chsc {

class StepLinearSolver {
 public:
  StepLinearSolver(int dim, scalar_t krylov_tol) : direct_(dim == 1), tol_(krylov_tol) {}

  void factor(const sparse_t& a) {
    if (direct_) {
      lu_ = std::make_unique<Eigen::SparseLU<sparse_t>>();
      lu_->compute(a);
      if (lu_->info() != Eigen::Success) {
        throw LinearSolveFailure("StepLinearSolver: sparse LU factorization failed");
      }
    } else {
      matrix_ = a;
      krylov_ = std::make_unique<
          Eigen::BiCGSTAB<sparse_t, Eigen::DiagonalPreconditioner<scalar_t>>>();
      krylov_->setTolerance(tol_);
      krylov_->setMaxIterations(20 * a.rows());
      krylov_->compute(matrix_);
      lu_.reset();
    }
  }

  vector_t solve(const vector_t& rhs) const {
    if (direct_) {
      vector_t x = lu_->solve(rhs);
      if (lu_->info() != Eigen::Success) {
        throw LinearSolveFailure("StepLinearSolver: sparse LU solve failed");
      }
      return x;
    }
    vector_t x = krylov_->solve(rhs);
    if (krylov_->info() == Eigen::Success) return x;
    // Stalled Krylov iteration: fall back to a direct factorization.
    Eigen::SparseLU<sparse_t> lu;
    lu.compute(matrix_);
    if (lu.info() != Eigen::Success) {
      throw LinearSolveFailure("StepLinearSolver: Krylov stalled and LU fallback failed");
    }
    x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) {
      throw LinearSolveFailure("StepLinearSolver: LU fallback solve failed");
    }
    return x;
  }

 private:
  bool direct_;
  scalar_t tol_;
  sparse_t matrix_;
  std::unique_ptr<Eigen::SparseLU<sparse_t>> lu_;
  std::unique_ptr<Eigen::BiCGSTAB<sparse_t, Eigen::DiagonalPreconditioner<scalar_t>>> krylov_;
};

}  // namespace chsc
