#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "zvem/mesh.hpp"
#include "zvem/quadrature.hpp"

namespace zvem {

/// Number of bivariate monomials of total degree <= degree.
constexpr int poly_dim(int degree) { return degree < 0 ? 0 : (degree + 1) * (degree + 2) / 2; }

/// Exponents (a, b) ordered by total degree, then by decreasing a. The first
/// poly_dim(d) entries span P_d for every d <= degree.
const std::vector<std::array<int, 2>>& monomial_exponents(int degree);

/// Index of x^a y^b in the ordering above.
constexpr int monomial_index(int a, int b) { return poly_dim(a + b - 1) + b; }

/// ((x - x_K) / h_K)^a ((y - y_K) / h_K)^b, |(a,b)| <= degree.
class ScaledMonomials2D {
public:
  ScaledMonomials2D(const Point& center, double scale, int degree);

  int degree() const noexcept { return degree_; }
  int size() const noexcept { return poly_dim(degree_); }
  const Point& center() const noexcept { return center_; }
  double scale() const noexcept { return scale_; }

  Eigen::VectorXd values(const Point& x) const;
  /// Row j holds the gradient of monomial j.
  Eigen::MatrixX2d gradients(const Point& x) const;

private:
  Point center_;
  double scale_;
  int degree_;
};

/// s^b on the edge parameter s in [-1/2, 1/2], b <= degree.
class ScaledMonomials1D {
public:
  explicit ScaledMonomials1D(int degree) : degree_(degree) {}
  int degree() const noexcept { return degree_; }
  int size() const noexcept { return degree_ + 1; }
  Eigen::VectorXd values(double s) const;

  /// Exact Gram matrix of the edge monomials, normalised by the edge length.
  Eigen::MatrixXd unit_gram() const;

private:
  int degree_;
};

/// Integrals of products of the two bases with `rule`.
/// Throws InvalidArgument if rule.order < deg(a) + deg(b).
Eigen::MatrixXd gram_matrix(const ScaledMonomials2D& a, const ScaledMonomials2D& b,
                            const QuadratureRule& rule);

/// Coefficients of h * d/dx and h * d/dy of every monomial of P_degree, in the
/// monomial coordinates of P_{degree-1}. Integer valued and cell independent.
Eigen::MatrixXd scaled_derivative_x(int degree);
Eigen::MatrixXd scaled_derivative_y(int degree);

/// Tensor polynomial coordinates: component c = 2*row + col (xx, xy, yx, yy)
/// occupies entries [c*n, (c+1)*n) for n = poly_dim(degree). Row i of a tensor
/// is the vector polynomial stored in [2*i*n, 2*(i+1)*n).
constexpr int tensor_index(int row, int col, int monomial, int degree) {
  return (2 * row + col) * poly_dim(degree) + monomial;
}

/// Bases of the gradient spaces and of the orthogonal complement of G_k in
/// tensor P_k, all expressed as coefficient columns.
struct GradientSplitBases {
  int k = 1;
  /// h_K e_i (x) grad m, m non-constant in P_k, in tensor-P_{k-1} coordinates.
  Eigen::MatrixXd grad_km1;
  /// h_K e_i (x) grad q, q non-constant in P_{k+1}, in tensor-P_k coordinates.
  Eigen::MatrixXd grad_k;
  /// Complement of G_k, orthonormal for (1/|K|) int_K tau : eta.
  Eigen::MatrixXd grad_k_perp;
  /// Row-level complement in vector-P_k coordinates; grad_k_perp places it in each row.
  Eigen::MatrixXd perp_vector;

  int dim_grad_km1() const { return static_cast<int>(grad_km1.cols()); }
  int dim_grad_k() const { return static_cast<int>(grad_k.cols()); }
  int dim_grad_k_perp() const { return static_cast<int>(grad_k_perp.cols()); }
};

/// `scalar_gram` is the Gram matrix of the scaled monomials of P_k on the cell
/// and `area` the cell area. Throws NumericalDegeneracy on rank loss.
GradientSplitBases build_gradient_split(int k, const Eigen::MatrixXd& scalar_gram, double area);

/// Convenience overload computing the Gram matrix with a cell quadrature.
GradientSplitBases build_gradient_split(const CellGeometry& cell, int k);

}  // namespace zvem
