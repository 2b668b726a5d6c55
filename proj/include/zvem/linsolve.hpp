#pragma once

#include <memory>

#include <Eigen/SparseLU>

#include "zvem/assemble.hpp"

namespace zvem {

/// Sparse LU factorization with a residual check on every solve. A handle is
/// exclusive: do not solve on it from two threads at once.
class LinearSolveHandle {
public:
  /// Throws SingularSystem if the factorization fails.
  explicit LinearSolveHandle(SparseMatrix a, double tolerance = 1e-10);

  /// Throws SingularSystem when ||A x - b|| > tol (||A|| ||x|| + ||b||) in the max norm.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

  const SparseMatrix& matrix() const noexcept { return a_; }
  double tolerance() const noexcept { return tol_; }

private:
  SparseMatrix a_;
  double tol_;
  double norm_inf_;
  std::shared_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> lu_;
};

LinearSolveHandle factorize(const SparseMatrix& a);

}  // namespace zvem
