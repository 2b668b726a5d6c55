#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "zvem/mesh.hpp"
#include "zvem/polybase.hpp"
#include "zvem/quadrature.hpp"

namespace zvem {

using Tensor2 = Eigen::Matrix2d;
using TensorField = std::function<Tensor2(const Point&)>;
using VectorField = std::function<Eigen::Vector2d(const Point&)>;
using ScalarField = std::function<double(const Point&)>;

enum class FieldKind { Stress0, Stress1, Velocity, Rotation };

/// Global unknown numbering [sigma0 | sigma1 | v | r]. Inside one stress field
/// the edge DoFs come first (by global edge), then the interior DoFs per cell.
class DofLayout {
public:
  DofLayout(const PolygonalMesh& mesh, int k);

  int k() const noexcept { return k_; }
  std::size_t num_edges() const noexcept { return num_edges_; }
  std::size_t num_cells() const noexcept { return num_cells_; }

  int edge_block() const noexcept { return 2 * (k_ + 1); }
  int grad_block() const noexcept { return 2 * (poly_dim(k_) - 1); }
  int perp_block() const noexcept { return k_ * (k_ + 1); }
  int interior_block() const noexcept { return grad_block() + perp_block(); }
  int velocity_block() const noexcept { return 2 * poly_dim(k_); }
  int rotation_block() const noexcept { return poly_dim(k_); }

  int stress_size() const noexcept { return stress_size_; }
  int offset(FieldKind kind) const noexcept;
  int size(FieldKind kind) const noexcept;
  int total() const noexcept { return offset(FieldKind::Rotation) + size(FieldKind::Rotation); }

  /// Field-relative stress indices.
  int edge_dof(int edge, int row, int beta) const noexcept {
    return edge * edge_block() + row * (k_ + 1) + beta;
  }
  int interior_dof(int cell, int j) const noexcept {
    return static_cast<int>(num_edges_) * edge_block() + cell * interior_block() + j;
  }
  /// Field-relative velocity / rotation indices.
  int velocity_dof(int cell, int row, int j) const noexcept {
    return cell * velocity_block() + row * poly_dim(k_) + j;
  }
  int rotation_dof(int cell, int j) const noexcept { return cell * rotation_block() + j; }

  /// Count implied by the DoF list.
  static long closed_form_total(int k, long edges, long cells);
  /// Count from the per-polygon formula (k+1)(5k+3) plus the edge DoFs.
  static long per_polygon_formula_total(int k, long edges, long cells);

private:
  int k_;
  std::size_t num_edges_;
  std::size_t num_cells_;
  int stress_size_;
};

/// Local stress DoFs of a cell: per local edge e, 2(k+1) values at
/// e*2(k+1) + i*(k+1) + beta, then the G_{k-1} moments, then the G_k^perp moments.
struct LocalStressLayout {
  int k = 1;
  int num_edges = 0;

  int edge_block() const noexcept { return 2 * (k + 1); }
  int edge_dof(int e, int row, int beta) const noexcept {
    return e * edge_block() + row * (k + 1) + beta;
  }
  int grad_offset() const noexcept { return num_edges * edge_block(); }
  /// Moment against h_K e_row (x) grad m_j, j >= 1.
  int grad_dof(int row, int j) const noexcept {
    return grad_offset() + row * (poly_dim(k) - 1) + (j - 1);
  }
  int perp_offset() const noexcept { return grad_offset() + 2 * (poly_dim(k) - 1); }
  int size() const noexcept { return perp_offset() + k * (k + 1); }
};

/// Field-relative global indices of the local stress DoFs of `cell`.
std::vector<int> local_stress_indices(const PolygonalMesh& mesh, const DofLayout& layout, int cell);

/// Geometry, monomials (degree k+1), Gram matrices and edge moment tables of one cell.
struct CellContext {
  int k = 1;
  CellGeometry geom;
  ScaledMonomials2D basis{Point::Zero(), 1.0, 0};
  QuadratureRule rule;
  /// Gram matrix of P_{k+1}; the leading poly_dim(k) block is the P_k Gram matrix.
  Eigen::MatrixXd gram;
  GradientSplitBases split;
  /// Per local edge: T(beta, j) = int_F s^beta m_j ds for m_j in P_{k+1}.
  std::vector<Eigen::MatrixXd> edge_tables;

  LocalStressLayout layout() const {
    return {k, static_cast<int>(geom.edges.size())};
  }
  Eigen::MatrixXd gram_k() const {
    const int n = poly_dim(k);
    return gram.topLeftCorner(n, n);
  }
  /// Block-diagonal Gram matrix of vector P_k.
  Eigen::MatrixXd vector_gram() const;
};

/// Default cell and edge quadrature orders.
constexpr int cell_order(int k) { return 2 * k + 3; }
constexpr int edge_order(int k) { return 2 * k + 2; }

CellContext make_cell_context(const PolygonalMesh& mesh, int cell, int k);

struct StressCellOperators {
  /// Local DoFs -> vector-P_k coefficients of div tau.
  Eigen::MatrixXd div;
  /// Right-hand side of the div system: rows int_K (div tau)_i m_j.
  Eigen::MatrixXd div_moments;
  /// Local DoFs -> tensor-P_k coefficients of the L2 projection.
  Eigen::MatrixXd pi0;
  /// Tensor-P_k coefficients -> local DoFs.
  Eigen::MatrixXd dof_of_poly;
  /// DOF_OF_POLY * PI0.
  Eigen::MatrixXd projector;
  /// |K| I (dofi-dofi).
  Eigen::MatrixXd stabilization;
  /// (I - P)^T S (I - P).
  Eigen::MatrixXd deflated_stabilization;
};

/// Throws NumericalDegeneracy on a singular local Gram system.
StressCellOperators build_stress_cell_operators(const CellContext& ctx);

/// Normalised moments (1/h_F) int_F (tau n_F)_i s^beta ds of a tensor field
/// along the segment a -> b, with n_F the clockwise-rotated tangent.
Eigen::VectorXd stress_edge_moments(const TensorField& field, const Point& a, const Point& b, int k);

/// Interior moments of a tensor field for one cell, in local-layout order.
Eigen::VectorXd stress_interior_moments(const TensorField& field, const CellContext& ctx);

/// Local DoF values of a tensor field on one cell.
Eigen::VectorXd local_stress_dofs(const TensorField& field, const CellContext& ctx);

Eigen::VectorXd interpolate_stress(const TensorField& field, const PolygonalMesh& mesh, int k);

/// Cellwise L2 projection onto vector P_k.
Eigen::VectorXd project_velocity(const VectorField& field, const PolygonalMesh& mesh, int k);

/// Cellwise L2 projection of the skew field s*J, J = [[0,1],[-1,0]], onto P_k.
Eigen::VectorXd project_rotation(const ScalarField& s, const PolygonalMesh& mesh, int k);

Eigen::Matrix2d rotation_generator();
/// s with skew(t) = s * rotation_generator().
double skew_coefficient(const Tensor2& t);

/// Point evaluation of cell polynomials from their coefficients.
double eval_scalar(const ScaledMonomials2D& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                   const Point& x);
Eigen::Vector2d eval_vector(const ScaledMonomials2D& basis,
                            const Eigen::Ref<const Eigen::VectorXd>& coeffs, const Point& x);
Tensor2 eval_tensor(const ScaledMonomials2D& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                    const Point& x);

}  // namespace zvem
