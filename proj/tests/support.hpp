#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "zvem/vspace.hpp"

namespace zvem::testing {

/// Single-cell mesh from a counter-clockwise loop.
inline PolygonalMesh single_cell(std::vector<Point> loop) {
  std::vector<int> idx(loop.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  return PolygonalMesh(std::move(loop), {idx}, all_dirichlet_tagging());
}

/// Regular m-gon with jittered radii and angles, shifted and scaled.
inline std::vector<Point> random_polygon(std::mt19937& rng, int m) {
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  std::uniform_real_distribution<double> scale(0.05, 1.5);
  const double s = scale(rng);
  const Point c(shift(rng), shift(rng));
  std::vector<Point> loop;
  for (int i = 0; i < m; ++i) {
    const double angle = 2.0 * std::numbers::pi * (i + jitter(rng)) / m;
    const double radius = s * (1.0 + jitter(rng));
    loop.emplace_back(c.x() + radius * std::cos(angle), c.y() + radius * std::sin(angle));
  }
  return loop;
}

inline PolygonalMesh unit_square_cell() {
  return single_cell({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

/// Random tensor polynomial of degree <= deg in global coordinates.
struct PolyTensor {
  int deg;
  std::vector<std::array<double, 4>> c;  // per monomial x^a y^b in monomial_exponents order

  Tensor2 operator()(const Point& x) const {
    Tensor2 t = Tensor2::Zero();
    const auto& exps = monomial_exponents(deg);
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double m = std::pow(x.x(), exps[j][0]) * std::pow(x.y(), exps[j][1]);
      t(0, 0) += c[j][0] * m;
      t(0, 1) += c[j][1] * m;
      t(1, 0) += c[j][2] * m;
      t(1, 1) += c[j][3] * m;
    }
    return t;
  }

  Eigen::Vector2d div(const Point& x) const {
    Eigen::Vector2d d = Eigen::Vector2d::Zero();
    const auto& exps = monomial_exponents(deg);
    for (std::size_t j = 0; j < c.size(); ++j) {
      const auto [a, b] = exps[j];
      const double mx = a == 0 ? 0.0 : a * std::pow(x.x(), a - 1) * std::pow(x.y(), b);
      const double my = b == 0 ? 0.0 : b * std::pow(x.x(), a) * std::pow(x.y(), b - 1);
      d.x() += c[j][0] * mx + c[j][1] * my;
      d.y() += c[j][2] * mx + c[j][3] * my;
    }
    return d;
  }
};

inline PolyTensor random_poly_tensor(std::mt19937& rng, int deg) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolyTensor p{deg, {}};
  for (int j = 0; j < poly_dim(deg); ++j) p.c.push_back({u(rng), u(rng), u(rng), u(rng)});
  return p;
}

/// L2 projection of a vector field onto vector P_k on the cell (reference).
inline Eigen::VectorXd l2_project_vector(const CellContext& ctx, const VectorField& f) {
  const int n = poly_dim(ctx.k);
  const QuadratureRule rule = cell_quadrature(ctx.geom, 2 * ctx.k + 8);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 2);
  for (std::size_t p = 0; p < rule.size(); ++p) {
    rhs += rule.weights[p] * ctx.basis.values(rule.points[p]).head(n) * f(rule.points[p]).transpose();
  }
  const Eigen::MatrixXd c = ctx.gram_k().ldlt().solve(rhs);
  Eigen::VectorXd out(2 * n);
  out << c.col(0), c.col(1);
  return out;
}

inline double l2_vector_norm(const CellContext& ctx, const Eigen::VectorXd& coeffs) {
  return std::sqrt(std::max(0.0, coeffs.dot(ctx.vector_gram() * coeffs)));
}

}  // namespace zvem::testing
