#include "zvem/linsolve.hpp"

#include "zvem/errors.hpp"

namespace zvem {

LinearSolveHandle::LinearSolveHandle(SparseMatrix a, double tolerance)
    : a_(std::move(a)), tol_(tolerance), norm_inf_(0.0),
      lu_(std::make_shared<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>()) {
  if (a_.rows() != a_.cols()) throw InvalidArgument("matrix must be square");
  a_.makeCompressed();
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(a_.rows());
  for (int col = 0; col < a_.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a_, col); it; ++it) row_sums[it.row()] += std::abs(it.value());
  }
  norm_inf_ = row_sums.size() > 0 ? row_sums.maxCoeff() : 0.0;
  lu_->compute(a_);
  if (lu_->info() != Eigen::Success) {
    throw SingularSystem("sparse LU failed: " + lu_->lastErrorMessage());
  }
}

Eigen::VectorXd LinearSolveHandle::solve(const Eigen::VectorXd& b) const {
  if (b.size() != a_.rows()) throw InvalidArgument("right-hand side has the wrong length");
  Eigen::VectorXd x = lu_->solve(b);
  if (lu_->info() != Eigen::Success || !x.allFinite()) throw SingularSystem("sparse LU solve failed");
  const double res = (a_ * x - b).lpNorm<Eigen::Infinity>();
  const double scale = norm_inf_ * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
  if (res > tol_ * scale) {
    throw SingularSystem("residual " + std::to_string(res) + " exceeds tolerance; matrix is numerically singular");
  }
  return x;
}

LinearSolveHandle factorize(const SparseMatrix& a) { return LinearSolveHandle(a); }

}  // namespace zvem
