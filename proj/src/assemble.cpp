#include "zvem/assemble.hpp"

#include <algorithm>

#include "zvem/errors.hpp"

namespace zvem {

void MaterialParams::validate() const {
  if (!(mu0 > 0.0 && mu0p > 0.0 && mu1 > 0.0)) throw InvalidArgument("every mu must be positive");
  if (!(lambda0 >= 0.0 && lambda0p >= 0.0 && lambda1 >= 0.0)) {
    throw InvalidArgument("every lambda must be non-negative");
  }
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
}

Tensor2 compliance_action(double mu, double lambda, const Tensor2& tau) {
  const double alpha = lambda / (2.0 * mu + 2.0 * lambda);
  return (tau - alpha * tau.trace() * Tensor2::Identity()) / (2.0 * mu);
}

Eigen::Matrix4d compliance_weights(double mu, double lambda) {
  Eigen::Matrix4d w;
  for (int c = 0; c < 4; ++c) {
    Tensor2 e = Tensor2::Zero();
    e(c / 2, c % 2) = 1.0;
    const Tensor2 ae = compliance_action(mu, lambda, e);
    for (int d = 0; d < 4; ++d) w(d, c) = ae(d / 2, d % 2);
  }
  return w;
}

Eigen::MatrixXd local_compliance_matrix(const CellContext& ctx, const StressCellOperators& ops,
                                        double mu, double lambda) {
  const int n = poly_dim(ctx.k);
  const Eigen::Matrix4d w = compliance_weights(mu, lambda);
  const Eigen::MatrixXd gram = ctx.gram_k();
  Eigen::MatrixXd weighted(4 * n, 4 * n);
  for (int c = 0; c < 4; ++c) {
    for (int d = 0; d < 4; ++d) weighted.block(c * n, d * n, n, n) = w(c, d) * gram;
  }
  Eigen::MatrixXd a = ops.pi0.transpose() * weighted * ops.pi0;
  a += ops.deflated_stabilization / (2.0 * mu);
  return 0.5 * (a + a.transpose());
}

LocalCouplings local_couplings(const CellContext& ctx, const StressCellOperators& ops, double rho) {
  const int n = poly_dim(ctx.k);
  const Eigen::MatrixXd gram = ctx.gram_k();
  LocalCouplings out;
  out.div = ops.div_moments;
  // (tau, s J) = int s (tau_xy - tau_yx).
  out.skew = gram * (ops.pi0.middleRows(n, n) - ops.pi0.middleRows(2 * n, n));
  out.mass = rho * ctx.vector_gram();
  return out;
}

namespace {

struct CellBlocks {
  std::vector<int> stress;  // field-relative
  Eigen::MatrixXd a0, a0p, a1, div, skew, mass;
};

CellBlocks cell_blocks(const PolygonalMesh& mesh, const DofLayout& layout, int c, const MaterialParams& p) {
  const CellContext ctx = make_cell_context(mesh, c, layout.k());
  const StressCellOperators ops = build_stress_cell_operators(ctx);
  CellBlocks b;
  b.stress = local_stress_indices(mesh, layout, c);
  b.a0 = local_compliance_matrix(ctx, ops, p.mu0, p.lambda0);
  b.a0p = local_compliance_matrix(ctx, ops, p.mu0p, p.lambda0p);
  b.a1 = local_compliance_matrix(ctx, ops, p.mu1, p.lambda1);
  LocalCouplings cpl = local_couplings(ctx, ops, p.rho);
  b.div = std::move(cpl.div);
  b.skew = std::move(cpl.skew);
  b.mass = std::move(cpl.mass);
  return b;
}

void scatter(std::vector<Triplet>& out, const Eigen::MatrixXd& m, const std::vector<int>& rows,
             const std::vector<int>& cols, double scale = 1.0) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      if (v != 0.0) out.emplace_back(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)], scale * v);
    }
  }
}

std::vector<int> shifted(const std::vector<int>& idx, int offset) {
  std::vector<int> out(idx.size());
  std::transform(idx.begin(), idx.end(), out.begin(), [offset](int i) { return i + offset; });
  return out;
}

std::vector<int> range(int first, int count) {
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = first + i;
  return out;
}

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

BlockOperators assemble_global(const PolygonalMesh& mesh, int k, const MaterialParams& params, Execution exec) {
  params.validate();
  BlockOperators ops{DofLayout(mesh, k), {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  const DofLayout& layout = ops.layout;
  const int nc = static_cast<int>(mesh.num_cells());

  std::vector<CellBlocks> blocks(static_cast<std::size_t>(nc));
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int c = 0; c < nc; ++c) blocks[static_cast<std::size_t>(c)] = cell_blocks(mesh, layout, c, params);
  } else {
    for (int c = 0; c < nc; ++c) blocks[static_cast<std::size_t>(c)] = cell_blocks(mesh, layout, c, params);
  }

  // Scatter in cell order so both paths produce identical matrices.
  const int s0 = layout.offset(FieldKind::Stress0);
  const int s1 = layout.offset(FieldKind::Stress1);
  const int vo = layout.offset(FieldKind::Velocity);
  const int ro = layout.offset(FieldKind::Rotation);
  std::vector<Triplet> a, b, a0, a0p, a1, m, jt, ht;
  for (int c = 0; c < nc; ++c) {
    const CellBlocks& cb = blocks[static_cast<std::size_t>(c)];
    const std::vector<int> vel = range(layout.velocity_dof(c, 0, 0), layout.velocity_block());
    const std::vector<int> rot = range(layout.rotation_dof(c, 0), layout.rotation_block());
    const auto g0 = shifted(cb.stress, s0);
    const auto g1 = shifted(cb.stress, s1);
    const auto gv = shifted(vel, vo);
    const auto gr = shifted(rot, ro);

    scatter(a0, cb.a0, cb.stress, cb.stress);
    scatter(a0p, cb.a0p, cb.stress, cb.stress);
    scatter(a1, cb.a1, cb.stress, cb.stress);
    scatter(m, cb.mass, vel, vel);
    scatter(jt, cb.div, vel, cb.stress);
    scatter(ht, cb.skew, rot, cb.stress);

    scatter(a, cb.a0, g0, g0);
    scatter(a, cb.a1, g1, g1);
    scatter(a, cb.mass, gv, gv);
    const Eigen::MatrixXd skew_t = cb.skew.transpose();
    scatter(a, skew_t, g0, gr);
    scatter(a, skew_t, g1, gr);
    scatter(a, cb.skew, gr, g0);
    scatter(a, cb.skew, gr, g1);

    scatter(b, cb.a0p, g0, g0, -1.0);
    const Eigen::MatrixXd div_t = cb.div.transpose();
    scatter(b, div_t, g0, gv, -1.0);
    scatter(b, div_t, g1, gv, -1.0);
    scatter(b, cb.div, gv, g0);
    scatter(b, cb.div, gv, g1);
  }

  const int n = layout.total();
  const int ns = layout.stress_size();
  const int nv = layout.size(FieldKind::Velocity);
  const int nr = layout.size(FieldKind::Rotation);
  ops.A = from_triplets(n, n, a);
  ops.B = from_triplets(n, n, b);
  ops.A0 = from_triplets(ns, ns, a0);
  ops.A0p = from_triplets(ns, ns, a0p);
  ops.A1 = from_triplets(ns, ns, a1);
  ops.M = from_triplets(nv, nv, m);
  ops.J = from_triplets(nv, ns, jt);
  ops.H = from_triplets(nr, ns, ht);

  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    if (mesh.edge(e).tag == BoundaryTag::GammaSigma) ops.traction_edges.push_back(e);
  }
  for (int off : {s0, s1}) {
    for (int e : ops.traction_edges) {
      for (int j = 0; j < layout.edge_block(); ++j) ops.constrained.push_back(off + layout.edge_dof(e, 0, 0) + j);
    }
  }
  return ops;
}

LoadAssembler::LoadAssembler(const PolygonalMesh& mesh, int k, double rho) : layout_(mesh, k), rho_(rho) {
  const int order = 2 * k + 6;
  cells_.resize(mesh.num_cells());
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    const ScaledMonomials2D basis(g.centroid, g.diameter, k);
    const QuadratureRule rule = cell_quadrature(g, order);
    CellData& d = cells_[static_cast<std::size_t>(c)];
    d.points = rule.points;
    d.weights = rule.weights;
    d.values.resize(basis.size(), static_cast<Eigen::Index>(rule.size()));
    for (std::size_t q = 0; q < rule.size(); ++q) d.values.col(static_cast<Eigen::Index>(q)) = basis.values(rule.points[q]);
  }
  const ScaledMonomials1D edge_basis(k);
  const Eigen::MatrixXd gram_inv = edge_basis.unit_gram().inverse();
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& edge = mesh.edge(e);
    if (edge.tag != BoundaryTag::GammaU) continue;
    const EdgeQuadrature q = edge_quadrature(mesh.vertex(edge.v[0]), mesh.vertex(edge.v[1]), order);
    EdgeData d;
    d.edge = e;
    d.points = q.points;
    d.weighted.resize(k + 1, static_cast<Eigen::Index>(q.size()));
    for (std::size_t p = 0; p < q.size(); ++p) {
      d.weighted.col(static_cast<Eigen::Index>(p)) = gram_inv * edge_basis.values(q.params[p]) * q.weights[p];
    }
    edges_.push_back(std::move(d));
  }
}

Eigen::VectorXd LoadAssembler::operator()(const TimeVectorField& f, const TimeVectorField& v_dirichlet,
                                          double t) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout_.total());
  const int k = layout_.k();
  const int n = poly_dim(k);
  if (f) {
    const int vo = layout_.offset(FieldKind::Velocity);
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      const CellData& d = cells_[c];
      Eigen::Matrix2Xd fv(2, static_cast<Eigen::Index>(d.points.size()));
      for (std::size_t q = 0; q < d.points.size(); ++q) {
        fv.col(static_cast<Eigen::Index>(q)) = rho_ * d.weights[q] * f(d.points[q], t);
      }
      const int base = vo + layout_.velocity_dof(static_cast<int>(c), 0, 0);
      out.segment(base, n) = d.values * fv.row(0).transpose();
      out.segment(base + n, n) = d.values * fv.row(1).transpose();
    }
  }
  if (v_dirichlet) {
    // Boundary edges: n_K = n_F, so the trace of DoF (e, i, beta) is (G^{-1} s)_beta e_i.
    for (const EdgeData& d : edges_) {
      Eigen::Matrix2Xd vd(2, static_cast<Eigen::Index>(d.points.size()));
      for (std::size_t q = 0; q < d.points.size(); ++q) vd.col(static_cast<Eigen::Index>(q)) = v_dirichlet(d.points[q], t);
      const int e0 = layout_.edge_dof(d.edge, 0, 0);
      for (int field : {layout_.offset(FieldKind::Stress0), layout_.offset(FieldKind::Stress1)}) {
        out.segment(field + e0, k + 1) = d.weighted * vd.row(0).transpose();
        out.segment(field + e0 + k + 1, k + 1) = d.weighted * vd.row(1).transpose();
      }
    }
  }
  return out;
}

ConstraintEvaluator::ConstraintEvaluator(const PolygonalMesh& mesh, const BlockOperators& ops)
    : k_(ops.layout.k()) {
  for (int e : ops.traction_edges) {
    const Edge& edge = mesh.edge(e);
    segments_.push_back({mesh.vertex(edge.v[0]), mesh.vertex(edge.v[1])});
  }
}

Eigen::VectorXd ConstraintEvaluator::operator()(const TimeTensorField& sigma0, const TimeTensorField& sigma1,
                                                double t) const {
  const int block = 2 * (k_ + 1);
  const int ne = static_cast<int>(segments_.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * ne * block);
  int field = 0;
  for (const TimeTensorField* sigma : {&sigma0, &sigma1}) {
    if (*sigma) {
      const TensorField at_t = [&](const Point& x) { return (*sigma)(x, t); };
      for (int e = 0; e < ne; ++e) {
        const auto& seg = segments_[static_cast<std::size_t>(e)];
        out.segment((field * ne + e) * block, block) = stress_edge_moments(at_t, seg[0], seg[1], k_);
      }
    }
    ++field;
  }
  return out;
}

EssentialConstraints::EssentialConstraints(int size, std::vector<int> constrained)
    : size_(size), constrained_(std::move(constrained)), position_(static_cast<std::size_t>(size), 0) {
  std::vector<char> mark(static_cast<std::size_t>(size), 0);
  for (std::size_t j = 0; j < constrained_.size(); ++j) {
    const int i = constrained_[j];
    if (i < 0 || i >= size) throw InvalidArgument("constrained index out of range");
    if (mark[static_cast<std::size_t>(i)]) throw InvalidArgument("constrained index listed twice");
    mark[static_cast<std::size_t>(i)] = 1;
    position_[static_cast<std::size_t>(i)] = -1 - static_cast<int>(j);
  }
  for (int i = 0; i < size; ++i) {
    if (!mark[static_cast<std::size_t>(i)]) {
      position_[static_cast<std::size_t>(i)] = static_cast<int>(free_.size());
      free_.push_back(i);
    }
  }
}

SparseMatrix EssentialConstraints::free_block(const SparseMatrix& a) const {
  std::vector<Triplet> t;
  for (int col = 0; col < a.outerSize(); ++col) {
    const int pc = position_[static_cast<std::size_t>(col)];
    if (pc < 0) continue;
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const int pr = position_[static_cast<std::size_t>(it.row())];
      if (pr >= 0) t.emplace_back(pr, pc, it.value());
    }
  }
  const int nf = static_cast<int>(free_.size());
  return from_triplets(nf, nf, t);
}

SparseMatrix EssentialConstraints::coupling_block(const SparseMatrix& a) const {
  std::vector<Triplet> t;
  for (int col = 0; col < a.outerSize(); ++col) {
    const int pc = position_[static_cast<std::size_t>(col)];
    if (pc >= 0) continue;
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const int pr = position_[static_cast<std::size_t>(it.row())];
      if (pr >= 0) t.emplace_back(pr, -1 - pc, it.value());
    }
  }
  return from_triplets(static_cast<int>(free_.size()), static_cast<int>(constrained_.size()), t);
}

Eigen::VectorXd EssentialConstraints::restrict_free(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(free_.size()));
  for (std::size_t i = 0; i < free_.size(); ++i) out[static_cast<Eigen::Index>(i)] = x[free_[i]];
  return out;
}

Eigen::VectorXd EssentialConstraints::expand(const Eigen::VectorXd& x_free, const Eigen::VectorXd& values) const {
  Eigen::VectorXd x(size_);
  for (std::size_t i = 0; i < free_.size(); ++i) x[free_[i]] = x_free[static_cast<Eigen::Index>(i)];
  for (std::size_t i = 0; i < constrained_.size(); ++i) x[constrained_[i]] = values[static_cast<Eigen::Index>(i)];
  return x;
}

ReducedSystem apply_essential_bc(const SparseMatrix& a, const Eigen::VectorXd& b,
                                 const EssentialConstraints& constraints, const Eigen::VectorXd& values) {
  if (values.size() != static_cast<Eigen::Index>(constraints.constrained().size())) {
    throw InvalidArgument("need one value per constrained index");
  }
  ReducedSystem out;
  out.matrix = constraints.free_block(a);
  out.rhs = constraints.restrict_free(b);
  if (values.size() > 0) out.rhs -= constraints.coupling_block(a) * values;
  return out;
}

}  // namespace zvem
