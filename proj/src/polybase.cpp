#include "zvem/polybase.hpp"

#include <map>
#include <mutex>

#include "zvem/errors.hpp"

namespace zvem {

const std::vector<std::array<int, 2>>& monomial_exponents(int degree) {
  static std::mutex mutex;
  static std::map<int, std::vector<std::array<int, 2>>> cache;
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace(degree);
  if (inserted) {
    for (int d = 0; d <= degree; ++d) {
      for (int b = 0; b <= d; ++b) it->second.push_back({d - b, b});
    }
  }
  return it->second;
}

ScaledMonomials2D::ScaledMonomials2D(const Point& center, double scale, int degree)
    : center_(center), scale_(scale), degree_(degree) {
  if (degree < 0) throw InvalidArgument("monomial degree must be >= 0");
  if (!(scale > 0.0)) throw InvalidArgument("monomial scale must be positive");
}

namespace {

Eigen::VectorXd powers(double x, int degree) {
  Eigen::VectorXd p(degree + 1);
  p[0] = 1.0;
  for (int i = 1; i <= degree; ++i) p[i] = p[i - 1] * x;
  return p;
}

}  // namespace

Eigen::VectorXd ScaledMonomials2D::values(const Point& x) const {
  const Eigen::VectorXd px = powers((x.x() - center_.x()) / scale_, degree_);
  const Eigen::VectorXd py = powers((x.y() - center_.y()) / scale_, degree_);
  Eigen::VectorXd v(size());
  int idx = 0;
  for (int d = 0; d <= degree_; ++d) {
    for (int b = 0; b <= d; ++b) v[idx++] = px[d - b] * py[b];
  }
  return v;
}

Eigen::MatrixX2d ScaledMonomials2D::gradients(const Point& x) const {
  const Eigen::VectorXd px = powers((x.x() - center_.x()) / scale_, degree_);
  const Eigen::VectorXd py = powers((x.y() - center_.y()) / scale_, degree_);
  Eigen::MatrixX2d g(size(), 2);
  int idx = 0;
  for (int d = 0; d <= degree_; ++d) {
    for (int b = 0; b <= d; ++b, ++idx) {
      const int a = d - b;
      g(idx, 0) = a == 0 ? 0.0 : a * px[a - 1] * py[b] / scale_;
      g(idx, 1) = b == 0 ? 0.0 : b * px[a] * py[b - 1] / scale_;
    }
  }
  return g;
}

Eigen::VectorXd ScaledMonomials1D::values(double s) const {
  Eigen::VectorXd v(size());
  double p = 1.0;
  for (int b = 0; b <= degree_; ++b) {
    v[b] = p;
    p *= s;
  }
  return v;
}

Eigen::MatrixXd ScaledMonomials1D::unit_gram() const {
  Eigen::MatrixXd g(size(), size());
  for (int i = 0; i <= degree_; ++i) {
    for (int j = 0; j <= degree_; ++j) {
      const int p = i + j;
      g(i, j) = (p % 2 == 1) ? 0.0 : 2.0 * std::pow(0.5, p + 1) / (p + 1);
    }
  }
  return g;
}

Eigen::MatrixXd gram_matrix(const ScaledMonomials2D& a, const ScaledMonomials2D& b,
                            const QuadratureRule& rule) {
  if (rule.order < a.degree() + b.degree()) {
    throw InvalidArgument("quadrature order " + std::to_string(rule.order) +
                          " too low for a Gram matrix of degrees " + std::to_string(a.degree()) +
                          " and " + std::to_string(b.degree()));
  }
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(a.size(), b.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd va = a.values(rule.points[q]);
    const Eigen::VectorXd vb = b.values(rule.points[q]);
    g.noalias() += rule.weights[q] * va * vb.transpose();
  }
  return g;
}

Eigen::MatrixXd scaled_derivative_x(int degree) {
  const auto& exps = monomial_exponents(degree);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(poly_dim(degree - 1), poly_dim(degree));
  for (int j = 0; j < poly_dim(degree); ++j) {
    const auto [a, b] = exps[static_cast<std::size_t>(j)];
    if (a > 0) d(monomial_index(a - 1, b), j) = a;
  }
  return d;
}

Eigen::MatrixXd scaled_derivative_y(int degree) {
  const auto& exps = monomial_exponents(degree);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(poly_dim(degree - 1), poly_dim(degree));
  for (int j = 0; j < poly_dim(degree); ++j) {
    const auto [a, b] = exps[static_cast<std::size_t>(j)];
    if (b > 0) d(monomial_index(a, b - 1), j) = b;
  }
  return d;
}

namespace {

/// Columns h*grad(q) for non-constant q in P_{degree+1}, in vector-P_degree coordinates.
Eigen::MatrixXd vector_gradients(int degree) {
  const int n = poly_dim(degree);
  const int nq = poly_dim(degree + 1);
  const Eigen::MatrixXd dx = scaled_derivative_x(degree + 1);
  const Eigen::MatrixXd dy = scaled_derivative_y(degree + 1);
  Eigen::MatrixXd g(2 * n, nq - 1);
  g.topRows(n) = dx.rightCols(nq - 1);
  g.bottomRows(n) = dy.rightCols(nq - 1);
  return g;
}

/// Places a vector-level basis into both tensor rows.
Eigen::MatrixXd tensorize_rows(const Eigen::MatrixXd& vec) {
  const Eigen::Index rows = vec.rows();
  const Eigen::Index cols = vec.cols();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2 * rows, 2 * cols);
  t.block(0, 0, rows, cols) = vec;
  t.block(rows, cols, rows, cols) = vec;
  return t;
}

}  // namespace

GradientSplitBases build_gradient_split(int k, const Eigen::MatrixXd& scalar_gram, double area) {
  if (k < 1) throw InvalidArgument("gradient split needs k >= 1");
  const int n = poly_dim(k);
  if (scalar_gram.rows() != n || scalar_gram.cols() != n) {
    throw InvalidArgument("scalar Gram matrix has the wrong size for degree " + std::to_string(k));
  }

  GradientSplitBases out;
  out.k = k;
  out.grad_km1 = tensorize_rows(vector_gradients(k - 1));
  const Eigen::MatrixXd grad_vec = vector_gradients(k);
  out.grad_k = tensorize_rows(grad_vec);

  Eigen::MatrixXd vec_gram = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  vec_gram.topLeftCorner(n, n) = scalar_gram;
  vec_gram.bottomRightCorner(n, n) = scalar_gram;

  // Complement = kernel of grad^T * Gram; rank must equal the analytic dimension.
  const Eigen::MatrixXd constraint = grad_vec.transpose() * vec_gram / area;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraint, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const int rank = static_cast<int>(grad_vec.cols());
  if (sv.size() < rank || sv[rank - 1] <= 1e-10 * sv[0]) {
    throw NumericalDegeneracy("gradient space lost rank; badly scaled cell?");
  }
  const int perp_dim = 2 * n - rank;
  Eigen::MatrixXd perp = svd.matrixV().rightCols(perp_dim);

  // Orthonormalise for (1/|K|) int_K w . w.
  const Eigen::MatrixXd perp_gram = perp.transpose() * vec_gram * perp / area;
  Eigen::LLT<Eigen::MatrixXd> llt(perp_gram);
  if (llt.info() != Eigen::Success) {
    throw NumericalDegeneracy("complement Gram matrix is not positive definite");
  }
  perp = llt.matrixU().solve<Eigen::OnTheRight>(perp);
  out.perp_vector = perp;
  out.grad_k_perp = tensorize_rows(perp);
  return out;
}

GradientSplitBases build_gradient_split(const CellGeometry& cell, int k) {
  const ScaledMonomials2D basis(cell.centroid, cell.diameter, k);
  const QuadratureRule rule = cell_quadrature(cell, 2 * k);
  return build_gradient_split(k, gram_matrix(basis, basis, rule), cell.area);
}

}  // namespace zvem
