#include "zvem/vspace.hpp"

#include "zvem/errors.hpp"

namespace zvem {

DofLayout::DofLayout(const PolygonalMesh& mesh, int k)
    : k_(k), num_edges_(mesh.num_edges()), num_cells_(mesh.num_cells()) {
  if (k < 1 || k > 3) throw InvalidArgument("degree k must be 1, 2 or 3");
  stress_size_ = static_cast<int>(num_edges_) * edge_block() +
                 static_cast<int>(num_cells_) * interior_block();
}

int DofLayout::offset(FieldKind kind) const noexcept {
  switch (kind) {
    case FieldKind::Stress0: return 0;
    case FieldKind::Stress1: return stress_size_;
    case FieldKind::Velocity: return 2 * stress_size_;
    case FieldKind::Rotation:
      return 2 * stress_size_ + static_cast<int>(num_cells_) * velocity_block();
  }
  return 0;
}

int DofLayout::size(FieldKind kind) const noexcept {
  switch (kind) {
    case FieldKind::Stress0:
    case FieldKind::Stress1: return stress_size_;
    case FieldKind::Velocity: return static_cast<int>(num_cells_) * velocity_block();
    case FieldKind::Rotation: return static_cast<int>(num_cells_) * rotation_block();
  }
  return 0;
}

long DofLayout::closed_form_total(int k, long edges, long cells) {
  const long per_cell = 2L * ((k + 1) * (k + 2) - 2 + k * (k + 1)) + 3L * (k + 1) * (k + 2) / 2;
  return 4L * (k + 1) * edges + cells * per_cell;
}

long DofLayout::per_polygon_formula_total(int k, long edges, long cells) {
  return 4L * (k + 1) * edges + static_cast<long>(k + 1) * (5 * k + 3) * cells;
}

std::vector<int> local_stress_indices(const PolygonalMesh& mesh, const DofLayout& layout, int cell) {
  const auto refs = mesh.cell_edges(cell);
  const int k = layout.k();
  const LocalStressLayout loc{k, static_cast<int>(refs.size())};
  std::vector<int> idx(static_cast<std::size_t>(loc.size()));
  for (int e = 0; e < loc.num_edges; ++e) {
    const int ge = refs[static_cast<std::size_t>(e)].edge;
    for (int i = 0; i < 2; ++i) {
      for (int b = 0; b <= k; ++b) {
        idx[static_cast<std::size_t>(loc.edge_dof(e, i, b))] = layout.edge_dof(ge, i, b);
      }
    }
  }
  for (int j = 0; j < layout.interior_block(); ++j) {
    idx[static_cast<std::size_t>(loc.grad_offset() + j)] = layout.interior_dof(cell, j);
  }
  return idx;
}

Eigen::MatrixXd CellContext::vector_gram() const {
  const int n = poly_dim(k);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  g.topLeftCorner(n, n) = gram.topLeftCorner(n, n);
  g.bottomRightCorner(n, n) = gram.topLeftCorner(n, n);
  return g;
}

CellContext make_cell_context(const PolygonalMesh& mesh, int cell, int k) {
  CellContext ctx;
  ctx.k = k;
  ctx.geom = cell_geometry(mesh, cell);
  ctx.basis = ScaledMonomials2D(ctx.geom.centroid, ctx.geom.diameter, k + 1);
  ctx.rule = cell_quadrature(ctx.geom, cell_order(k));
  ctx.gram = gram_matrix(ctx.basis, ctx.basis, ctx.rule);
  ctx.split = build_gradient_split(k, ctx.gram.topLeftCorner(poly_dim(k), poly_dim(k)), ctx.geom.area);

  const ScaledMonomials1D edge_basis(k);
  ctx.edge_tables.reserve(ctx.geom.edges.size());
  for (const auto& edge : ctx.geom.edges) {
    const EdgeQuadrature q = edge_quadrature(edge, 2 * k + 1);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, ctx.basis.size());
    for (std::size_t p = 0; p < q.size(); ++p) {
      t.noalias() += q.weights[p] * edge_basis.values(q.params[p]) *
                     ctx.basis.values(q.points[p]).transpose();
    }
    ctx.edge_tables.push_back(std::move(t));
  }
  return ctx;
}

StressCellOperators build_stress_cell_operators(const CellContext& ctx) {
  const int k = ctx.k;
  const int n = poly_dim(k);
  const int n1 = poly_dim(k + 1);
  const LocalStressLayout loc = ctx.layout();
  const int ndof = loc.size();
  const int ne = loc.num_edges;
  const double area = ctx.geom.area;
  const double h = ctx.geom.diameter;
  const GradientSplitBases& split = ctx.split;
  const int pd = split.dim_grad_k_perp() / 2;

  const Eigen::MatrixXd edge_gram_inv = ScaledMonomials1D(k).unit_gram().inverse();

  // On edge e, (tau n_F)_i = sum_g a_g s^g with a = G^{-1} chi. Rows (i, j) of the
  // result: sum_F int_F (tau n_K)_i m_j ds over the first n_test monomials.
  auto edge_integrals = [&](int n_test) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n_test, ndof);
    for (int e = 0; e < ne; ++e) {
      const double sign = ctx.geom.edges[static_cast<std::size_t>(e)].sign;
      const Eigen::MatrixXd t = ctx.edge_tables[static_cast<std::size_t>(e)].leftCols(n_test);
      const Eigen::MatrixXd w = sign * t.transpose() * edge_gram_inv;  // n_test x (k+1)
      for (int i = 0; i < 2; ++i) {
        out.block(i * n_test, loc.edge_dof(e, i, 0), n_test, k + 1) += w;
      }
    }
    return out;
  };

  StressCellOperators ops;

  // int_K (div tau)_i m_j = -int_K tau_i . grad m_j + sum_F int_F (tau n)_i m_j.
  Eigen::MatrixXd r = edge_integrals(n);
  for (int i = 0; i < 2; ++i) {
    for (int j = 1; j < n; ++j) r(i * n + j, loc.grad_dof(i, j)) -= area / h;
  }
  ops.div_moments = r;

  Eigen::LDLT<Eigen::MatrixXd> gram_k(ctx.gram.topLeftCorner(n, n));
  if (gram_k.info() != Eigen::Success) throw NumericalDegeneracy("singular P_k Gram matrix");
  ops.div.resize(2 * n, ndof);
  for (int i = 0; i < 2; ++i) ops.div.middleRows(i * n, n) = gram_k.solve(r.middleRows(i * n, n));

  // Moments against h grad q (q in P_{k+1} non-constant) and against the complement.
  const Eigen::MatrixXd edge_k1 = edge_integrals(n1);
  const Eigen::MatrixXd cross_gram = ctx.gram.topRows(n);  // n x n1, int m_j q_l
  Eigen::MatrixXd basis_change(2 * n, 2 * n);
  basis_change.leftCols(n1 - 1) = split.grad_k.topLeftCorner(2 * n, n1 - 1);
  basis_change.rightCols(pd) = split.perp_vector;
  const Eigen::MatrixXd vgram = ctx.vector_gram();
  Eigen::PartialPivLU<Eigen::MatrixXd> lhs(basis_change.transpose() * vgram);

  ops.pi0.resize(4 * n, ndof);
  for (int i = 0; i < 2; ++i) {
    Eigen::MatrixXd b(2 * n, ndof);
    const Eigen::MatrixXd div_q = cross_gram.rightCols(n1 - 1).transpose() * ops.div.middleRows(i * n, n);
    b.topRows(n1 - 1) = h * (edge_k1.middleRows(i * n1 + 1, n1 - 1) - div_q);
    b.bottomRows(pd).setZero();
    for (int l = 0; l < pd; ++l) b(n1 - 1 + l, loc.perp_offset() + i * pd + l) = area;
    ops.pi0.middleRows(2 * i * n, 2 * n) = lhs.solve(b);
  }

  // DoFs of tensor polynomials, exact through the Gram and edge tables.
  const Eigen::MatrixXd grad_km1_vec = split.grad_km1.topLeftCorner(2 * poly_dim(k - 1), n - 1);
  Eigen::MatrixXd grad_embed = Eigen::MatrixXd::Zero(2 * n, n - 1);
  grad_embed.topRows(poly_dim(k - 1)) = grad_km1_vec.topRows(poly_dim(k - 1));
  grad_embed.middleRows(n, poly_dim(k - 1)) = grad_km1_vec.bottomRows(poly_dim(k - 1));

  ops.dof_of_poly = Eigen::MatrixXd::Zero(ndof, 4 * n);
  for (int i = 0; i < 2; ++i) {
    const int cols = 2 * i * n;  // row i of the tensor, as a vector polynomial
    ops.dof_of_poly.block(loc.grad_dof(i, 1), cols, n - 1, 2 * n) =
        grad_embed.transpose() * vgram / area;
    ops.dof_of_poly.block(loc.perp_offset() + i * pd, cols, pd, 2 * n) =
        split.perp_vector.transpose() * vgram / area;
    for (int e = 0; e < ne; ++e) {
      const auto& edge = ctx.geom.edges[static_cast<std::size_t>(e)];
      const Eigen::MatrixXd t = ctx.edge_tables[static_cast<std::size_t>(e)].leftCols(n) / edge.length;
      for (int col = 0; col < 2; ++col) {
        ops.dof_of_poly.block(loc.edge_dof(e, i, 0), cols + col * n, k + 1, n) = edge.normal[col] * t;
      }
    }
  }

  ops.projector = ops.dof_of_poly * ops.pi0;
  ops.stabilization = area * Eigen::MatrixXd::Identity(ndof, ndof);
  const Eigen::MatrixXd rem = Eigen::MatrixXd::Identity(ndof, ndof) - ops.projector;
  ops.deflated_stabilization = rem.transpose() * ops.stabilization * rem;
  return ops;
}

Eigen::VectorXd stress_edge_moments(const TensorField& field, const Point& a, const Point& b, int k) {
  const EdgeQuadrature q = edge_quadrature(a, b, 2 * k + 6);
  const Point tangent = (b - a).normalized();
  const Eigen::Vector2d normal(tangent.y(), -tangent.x());
  const ScaledMonomials1D basis(k);
  const double length = (b - a).norm();
  Eigen::VectorXd chi = Eigen::VectorXd::Zero(2 * (k + 1));
  for (std::size_t p = 0; p < q.size(); ++p) {
    const Eigen::Vector2d tn = field(q.points[p]) * normal;
    const Eigen::VectorXd s = basis.values(q.params[p]);
    chi.head(k + 1) += q.weights[p] * tn.x() * s;
    chi.tail(k + 1) += q.weights[p] * tn.y() * s;
  }
  return chi / length;
}

Eigen::VectorXd stress_interior_moments(const TensorField& field, const CellContext& ctx) {
  const int k = ctx.k;
  const int n = poly_dim(k);
  const int pd = ctx.split.dim_grad_k_perp() / 2;
  const QuadratureRule rule = cell_quadrature(ctx.geom, 2 * k + 6);
  const double h = ctx.geom.diameter;
  // Row moments int tau_i . w for w in vector P_k, then map to the DoF bases.
  Eigen::MatrixXd row_moments = Eigen::MatrixXd::Zero(2 * n, 2);
  Eigen::MatrixXd grad_row = Eigen::MatrixXd::Zero(n - 1, 2);
  for (std::size_t p = 0; p < rule.size(); ++p) {
    const Tensor2 t = field(rule.points[p]);
    const Eigen::VectorXd m = ctx.basis.values(rule.points[p]).head(n);
    const Eigen::MatrixX2d g = ctx.basis.gradients(rule.points[p]).topRows(n);
    for (int i = 0; i < 2; ++i) {
      row_moments.col(i).head(n) += rule.weights[p] * t(i, 0) * m;
      row_moments.col(i).tail(n) += rule.weights[p] * t(i, 1) * m;
      grad_row.col(i) += rule.weights[p] * h * (g.bottomRows(n - 1) * t.row(i).transpose());
    }
  }
  Eigen::VectorXd out(2 * (n - 1) + 2 * pd);
  for (int i = 0; i < 2; ++i) {
    out.segment(i * (n - 1), n - 1) = grad_row.col(i) / ctx.geom.area;
    out.segment(2 * (n - 1) + i * pd, pd) =
        ctx.split.perp_vector.transpose() * row_moments.col(i) / ctx.geom.area;
  }
  return out;
}

Eigen::VectorXd local_stress_dofs(const TensorField& field, const CellContext& ctx) {
  const LocalStressLayout loc = ctx.layout();
  Eigen::VectorXd dofs(loc.size());
  for (int e = 0; e < loc.num_edges; ++e) {
    const auto& edge = ctx.geom.edges[static_cast<std::size_t>(e)];
    const Point half = 0.5 * edge.length * edge.tangent;
    dofs.segment(loc.edge_dof(e, 0, 0), loc.edge_block()) =
        stress_edge_moments(field, edge.midpoint - half, edge.midpoint + half, ctx.k);
  }
  dofs.tail(loc.size() - loc.grad_offset()) = stress_interior_moments(field, ctx);
  return dofs;
}

Eigen::VectorXd interpolate_stress(const TensorField& field, const PolygonalMesh& mesh, int k) {
  const DofLayout layout(mesh, k);
  Eigen::VectorXd out(layout.stress_size());
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& edge = mesh.edge(e);
    out.segment(layout.edge_dof(e, 0, 0), layout.edge_block()) =
        stress_edge_moments(field, mesh.vertex(edge.v[0]), mesh.vertex(edge.v[1]), k);
  }
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const CellContext ctx = make_cell_context(mesh, c, k);
    out.segment(layout.interior_dof(c, 0), layout.interior_block()) = stress_interior_moments(field, ctx);
  }
  return out;
}

namespace {

template <typename Moments>
Eigen::VectorXd project_cellwise(const PolygonalMesh& mesh, int k, int components, Moments&& moments) {
  const int n = poly_dim(k);
  Eigen::VectorXd out(static_cast<Eigen::Index>(mesh.num_cells()) * components * n);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const CellGeometry geom = cell_geometry(mesh, c);
    const ScaledMonomials2D basis(geom.centroid, geom.diameter, k);
    const QuadratureRule rule = cell_quadrature(geom, 2 * k + 6);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, components);
    for (std::size_t p = 0; p < rule.size(); ++p) {
      rhs.noalias() += rule.weights[p] * basis.values(rule.points[p]) * moments(rule.points[p]).transpose();
    }
    const Eigen::MatrixXd coeffs = gram_matrix(basis, basis, rule).ldlt().solve(rhs);
    for (int i = 0; i < components; ++i) out.segment((c * components + i) * n, n) = coeffs.col(i);
  }
  return out;
}

}  // namespace

Eigen::VectorXd project_velocity(const VectorField& field, const PolygonalMesh& mesh, int k) {
  return project_cellwise(mesh, k, 2, [&](const Point& x) -> Eigen::VectorXd { return field(x); });
}

Eigen::VectorXd project_rotation(const ScalarField& s, const PolygonalMesh& mesh, int k) {
  return project_cellwise(mesh, k, 1, [&](const Point& x) -> Eigen::VectorXd {
    return Eigen::VectorXd::Constant(1, s(x));
  });
}

Eigen::Matrix2d rotation_generator() {
  Eigen::Matrix2d j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

double skew_coefficient(const Tensor2& t) { return 0.5 * (t(0, 1) - t(1, 0)); }

double eval_scalar(const ScaledMonomials2D& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                   const Point& x) {
  return basis.values(x).head(coeffs.size()).dot(coeffs);
}

Eigen::Vector2d eval_vector(const ScaledMonomials2D& basis,
                            const Eigen::Ref<const Eigen::VectorXd>& coeffs, const Point& x) {
  const Eigen::Index n = coeffs.size() / 2;
  const Eigen::VectorXd m = basis.values(x).head(n);
  return {m.dot(coeffs.head(n)), m.dot(coeffs.tail(n))};
}

Tensor2 eval_tensor(const ScaledMonomials2D& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                    const Point& x) {
  const Eigen::Index n = coeffs.size() / 4;
  const Eigen::VectorXd m = basis.values(x).head(n);
  Tensor2 t;
  t << m.dot(coeffs.segment(0, n)), m.dot(coeffs.segment(n, n)), m.dot(coeffs.segment(2 * n, n)),
      m.dot(coeffs.segment(3 * n, n));
  return t;
}

}  // namespace zvem
