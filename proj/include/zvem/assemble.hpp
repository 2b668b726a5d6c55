#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "zvem/vspace.hpp"

namespace zvem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Lame pairs of the Maxwell spring (mu0, lambda0), the dashpot (mu0p, lambda0p)
/// and the parallel spring (mu1, lambda1); density rho.
struct MaterialParams {
  double mu0 = 3.0;
  double lambda0 = 2.0;
  double mu0p = 4.0;
  double lambda0p = 3.0;
  double mu1 = 4.0;
  double lambda1 = 5.0;
  double rho = 1.0;

  /// Throws InvalidArgument unless every mu > 0, every lambda >= 0 and rho > 0.
  void validate() const;

  static MaterialParams standard() { return {}; }
  static MaterialParams nearly_incompressible() { return {3.0, 1.5e4, 3.0, 1.5e4, 9.0, 4.5e4, 1.0}; }
};

/// (1/2mu) (tau - lambda/(2mu + 2lambda) tr(tau) I).
Tensor2 compliance_action(double mu, double lambda, const Tensor2& tau);

/// Compliance on tensor components (xx, xy, yx, yy).
Eigen::Matrix4d compliance_weights(double mu, double lambda);

/// Consistency part PI0^T (C (x) M_k) PI0 plus (1/2mu) times the deflated stabilization.
Eigen::MatrixXd local_compliance_matrix(const CellContext& ctx, const StressCellOperators& ops,
                                        double mu, double lambda);

struct LocalCouplings {
  /// (div tau, w): velocity coefficients x local stress DoFs.
  Eigen::MatrixXd div;
  /// (tau, s J): rotation coefficients x local stress DoFs.
  Eigen::MatrixXd skew;
  /// rho * vector P_k Gram matrix.
  Eigen::MatrixXd mass;
};

LocalCouplings local_couplings(const CellContext& ctx, const StressCellOperators& ops, double rho);

enum class Execution { Serial, Parallel };

/// Global operators of A x' = B x + C(t). Block matrices are field-relative.
struct BlockOperators {
  DofLayout layout;
  SparseMatrix A;
  SparseMatrix B;
  SparseMatrix A0, A0p, A1, M, J, H;
  /// Global indices of stress edge DoFs on traction edges, both stress fields.
  std::vector<int> constrained;
  /// Traction edges, ascending.
  std::vector<int> traction_edges;
};

BlockOperators assemble_global(const PolygonalMesh& mesh, int k, const MaterialParams& params,
                               Execution exec = Execution::Parallel);

using TimeVectorField = std::function<Eigen::Vector2d(const Point&, double)>;
using TimeTensorField = std::function<Tensor2(const Point&, double)>;

/// Evaluates C(t) = [g; g; F; 0]: F = (rho f, w) and g = <tau n, v_D> on velocity edges.
class LoadAssembler {
public:
  LoadAssembler(const PolygonalMesh& mesh, int k, double rho);

  /// Either field may be empty (treated as zero).
  Eigen::VectorXd operator()(const TimeVectorField& f, const TimeVectorField& v_dirichlet, double t) const;

  const DofLayout& layout() const noexcept { return layout_; }

private:
  struct CellData {
    std::vector<Point> points;
    std::vector<double> weights;
    Eigen::MatrixXd values;  // monomial x point
  };
  struct EdgeData {
    int edge = -1;
    std::vector<Point> points;
    Eigen::MatrixXd weighted;  // (G^{-1} s^gamma) * w, (k+1) x point
  };

  DofLayout layout_;
  double rho_;
  std::vector<CellData> cells_;
  std::vector<EdgeData> edges_;
};

/// Constrained values at time t: edge moments of the exact traction stresses.
class ConstraintEvaluator {
public:
  ConstraintEvaluator(const PolygonalMesh& mesh, const BlockOperators& ops);

  /// Values aligned with ops.constrained.
  Eigen::VectorXd operator()(const TimeTensorField& sigma0, const TimeTensorField& sigma1, double t) const;

private:
  int k_;
  std::vector<std::array<Point, 2>> segments_;
};

/// Symmetric elimination of prescribed unknowns.
class EssentialConstraints {
public:
  EssentialConstraints(int size, std::vector<int> constrained);

  int size() const noexcept { return size_; }
  const std::vector<int>& constrained() const noexcept { return constrained_; }
  const std::vector<int>& free() const noexcept { return free_; }

  SparseMatrix free_block(const SparseMatrix& a) const;
  SparseMatrix coupling_block(const SparseMatrix& a) const;
  Eigen::VectorXd restrict_free(const Eigen::VectorXd& x) const;
  Eigen::VectorXd expand(const Eigen::VectorXd& x_free, const Eigen::VectorXd& values) const;

private:
  int size_;
  std::vector<int> constrained_;
  std::vector<int> free_;
  std::vector<int> position_;  // index in free_ or -(1 + index in constrained_)
};

struct ReducedSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Eliminates the constrained unknowns of a x = b. Throws InvalidArgument if
/// `values` does not have one entry per constrained index.
ReducedSystem apply_essential_bc(const SparseMatrix& a, const Eigen::VectorXd& b,
                                 const EssentialConstraints& constraints, const Eigen::VectorXd& values);

}  // namespace zvem
