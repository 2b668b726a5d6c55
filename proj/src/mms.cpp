#include "zvem/mms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zvem/errors.hpp"

namespace zvem {

double TimeProfile::value(double t) const {
  switch (kind) {
    case Kind::Square: return t * t;
    case Kind::Cube: return t * t * t;
    case Kind::Cosine: return std::cos(t);
    case Kind::Exp: return std::exp(t);
  }
  return 0.0;
}

double TimeProfile::rate(double t) const {
  switch (kind) {
    case Kind::Square: return 2.0 * t;
    case Kind::Cube: return 3.0 * t * t;
    case Kind::Cosine: return -std::sin(t);
    case Kind::Exp: return std::exp(t);
  }
  return 0.0;
}

double TimeProfile::accel(double t) const {
  switch (kind) {
    case Kind::Square: return 2.0;
    case Kind::Cube: return 6.0 * t;
    case Kind::Cosine: return -std::cos(t);
    case Kind::Exp: return std::exp(t);
  }
  return 0.0;
}

double TimeProfile::memory(double a, double t) const {
  const double decay = std::exp(-a * t);
  switch (kind) {
    case Kind::Square: return 2.0 * (t / a - (1.0 - decay) / (a * a));
    case Kind::Cube: return 3.0 * (t * t / a - 2.0 * t / (a * a) + 2.0 * (1.0 - decay) / (a * a * a));
    case Kind::Cosine: return -(a * std::sin(t) - std::cos(t) + decay) / (a * a + 1.0);
    case Kind::Exp: return (std::exp(t) - decay) / (a + 1.0);
  }
  return 0.0;
}

namespace {

Tensor2 sym(const Eigen::Matrix2d& g) { return 0.5 * (g + g.transpose()); }

SpatialProfile bubble_x() {
  auto p = [](double z) { return z * (1.0 - z); };
  auto dp = [](double z) { return 1.0 - 2.0 * z; };
  SpatialProfile s;
  s.value = [=](const Point& x) { return Eigen::Vector2d(p(x.x()) * p(x.y()), 0.0); };
  s.grad = [=](const Point& x) {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    g(0, 0) = dp(x.x()) * p(x.y());
    g(0, 1) = p(x.x()) * dp(x.y());
    return g;
  };
  s.laplacian = [=](const Point& x) { return Eigen::Vector2d(-2.0 * (p(x.x()) + p(x.y())), 0.0); };
  s.grad_div = [=](const Point& x) { return Eigen::Vector2d(-2.0 * p(x.y()), dp(x.x()) * dp(x.y())); };
  return s;
}

SpatialProfile trig_x() {
  SpatialProfile s;
  s.value = [](const Point& x) { return Eigen::Vector2d(std::exp(-x.y()) * std::sin(x.x()), 0.0); };
  s.grad = [](const Point& x) {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    g(0, 0) = std::exp(-x.y()) * std::cos(x.x());
    g(0, 1) = -std::exp(-x.y()) * std::sin(x.x());
    return g;
  };
  s.laplacian = [](const Point&) { return Eigen::Vector2d::Zero().eval(); };
  s.grad_div = [](const Point& x) {
    return Eigen::Vector2d(-std::exp(-x.y()) * std::sin(x.x()), -std::exp(-x.y()) * std::cos(x.x()));
  };
  return s;
}

SpatialProfile exp_y() {
  SpatialProfile s;
  s.value = [](const Point& x) { return Eigen::Vector2d(0.0, std::exp(x.x())); };
  s.grad = [](const Point& x) {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    g(1, 0) = std::exp(x.x());
    return g;
  };
  s.laplacian = [](const Point& x) { return Eigen::Vector2d(0.0, std::exp(x.x())); };
  s.grad_div = [](const Point&) { return Eigen::Vector2d::Zero().eval(); };
  return s;
}

void bind_fields(ManufacturedCase& mc) {
  const auto terms = mc.terms;
  const MaterialParams p = mc.params;
  const double a_dev = p.mu0 / p.mu0p;
  const double a_vol = (p.mu0 + p.lambda0) / (p.mu0p + p.lambda0p);

  mc.u = [terms](const Point& x, double t) {
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    for (const auto& [th, sp] : terms) out += th.value(t) * sp.value(x);
    return out;
  };
  mc.v = [terms](const Point& x, double t) {
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    for (const auto& [th, sp] : terms) out += th.rate(t) * sp.value(x);
    return out;
  };
  mc.strain_rate = [terms](const Point& x, double t) {
    Tensor2 out = Tensor2::Zero();
    for (const auto& [th, sp] : terms) out += th.rate(t) * sym(sp.grad(x));
    return out;
  };
  mc.sigma1 = [terms, p](const Point& x, double t) {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    for (const auto& [th, sp] : terms) g += th.value(t) * sp.grad(x);
    return Tensor2(2.0 * p.mu1 * sym(g) + p.lambda1 * g.trace() * Tensor2::Identity());
  };
  mc.sigma0 = [terms, p, a_dev, a_vol](const Point& x, double t) {
    Tensor2 out = Tensor2::Zero();
    for (const auto& [th, sp] : terms) {
      const Tensor2 e = sym(sp.grad(x));
      const Tensor2 dev = e - 0.5 * e.trace() * Tensor2::Identity();
      out += 2.0 * p.mu0 * th.memory(a_dev, t) * dev +
             (p.mu0 + p.lambda0) * th.memory(a_vol, t) * e.trace() * Tensor2::Identity();
    }
    return out;
  };
  mc.rotation = [terms](const Point& x, double t) {
    double s = 0.0;
    for (const auto& [th, sp] : terms) s += th.value(t) * skew_coefficient(sp.grad(x));
    return s;
  };
  mc.div_stress = [terms, p, a_dev, a_vol](const Point& x, double t) {
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    for (const auto& [th, sp] : terms) {
      const Eigen::Vector2d lap = sp.laplacian(x);
      const Eigen::Vector2d gd = sp.grad_div(x);
      out += th.value(t) * (p.mu1 * (lap + gd) + p.lambda1 * gd);
      out += p.mu0 * th.memory(a_dev, t) * lap + (p.mu0 + p.lambda0) * th.memory(a_vol, t) * gd;
    }
    return out;
  };
  const auto div_stress = mc.div_stress;
  mc.f = [terms, p, div_stress](const Point& x, double t) {
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (const auto& [th, sp] : terms) acc += th.accel(t) * sp.value(x);
    return Eigen::Vector2d(acc - div_stress(x, t) / p.rho);
  };
}

}  // namespace

const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names{"poly-t2", "poly-t3", "exp-trig"};
  return names;
}

ManufacturedCase build_case(const std::string& name, const MaterialParams& params) {
  params.validate();
  ManufacturedCase mc;
  mc.name = name;
  mc.params = params;
  using Kind = TimeProfile::Kind;
  if (name == "poly-t2") {
    mc.terms.emplace_back(TimeProfile{Kind::Square}, bubble_x());
  } else if (name == "poly-t3") {
    mc.terms.emplace_back(TimeProfile{Kind::Cube}, bubble_x());
  } else if (name == "exp-trig") {
    mc.terms.emplace_back(TimeProfile{Kind::Cosine}, trig_x());
    mc.terms.emplace_back(TimeProfile{Kind::Exp}, exp_y());
  } else {
    throw InvalidArgument("unknown manufactured case '" + name + "'");
  }
  bind_fields(mc);
  return mc;
}

ManufacturedCase patch_case(const MaterialParams& params) {
  params.validate();
  ManufacturedCase mc;
  mc.name = "patch";
  mc.params = params;
  mc.has_load = false;
  bind_fields(mc);
  mc.sigma1 = [](const Point&, double) {
    Tensor2 s;
    s << 1.0, 0.3, 0.3, 2.0;
    return s;
  };
  return mc;
}

double FieldErrors::max() const {
  const auto a = as_array();
  return *std::max_element(a.begin(), a.end());
}

FieldErrors error_norms(const PolygonalMesh& mesh, int k, const Eigen::VectorXd& x, const ManufacturedCase& mc,
                        double t, Execution exec) {
  const DofLayout layout(mesh, k);
  if (x.size() != layout.total()) throw InvalidArgument("state length does not match the layout");
  const int nc = static_cast<int>(mesh.num_cells());
  const int n = poly_dim(k);
  std::vector<std::array<double, 5>> per_cell(static_cast<std::size_t>(nc));

  auto cell_errors = [&](int c) {
    const CellContext ctx = make_cell_context(mesh, c, k);
    const StressCellOperators ops = build_stress_cell_operators(ctx);
    const std::vector<int> idx = local_stress_indices(mesh, layout, c);
    Eigen::VectorXd s0(static_cast<Eigen::Index>(idx.size())), s1(s0.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      s0[static_cast<Eigen::Index>(i)] = x[layout.offset(FieldKind::Stress0) + idx[i]];
      s1[static_cast<Eigen::Index>(i)] = x[layout.offset(FieldKind::Stress1) + idx[i]];
    }
    const Eigen::VectorXd p0 = ops.pi0 * s0;
    const Eigen::VectorXd p1 = ops.pi0 * s1;
    const Eigen::VectorXd dv = ops.div * (s0 + s1);
    const Eigen::VectorXd vel = x.segment(layout.offset(FieldKind::Velocity) + layout.velocity_dof(c, 0, 0), 2 * n);
    const Eigen::VectorXd rot = x.segment(layout.offset(FieldKind::Rotation) + layout.rotation_dof(c, 0), n);

    const QuadratureRule rule = cell_quadrature(ctx.geom, 2 * k + 6);
    std::array<double, 5> e{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point& pt = rule.points[q];
      const double w = rule.weights[q];
      e[0] += w * (eval_tensor(ctx.basis, p0, pt) - mc.sigma0(pt, t)).squaredNorm();
      e[1] += w * (eval_tensor(ctx.basis, p1, pt) - mc.sigma1(pt, t)).squaredNorm();
      e[2] += w * (eval_vector(ctx.basis, vel, pt) - mc.v(pt, t)).squaredNorm();
      const double ds = eval_scalar(ctx.basis, rot, pt) - mc.rotation(pt, t);
      e[3] += w * 2.0 * ds * ds;
      e[4] += w * (eval_vector(ctx.basis, dv, pt) - mc.div_stress(pt, t)).squaredNorm();
    }
    per_cell[static_cast<std::size_t>(c)] = e;
  };

  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int c = 0; c < nc; ++c) cell_errors(c);
  } else {
    for (int c = 0; c < nc; ++c) cell_errors(c);
  }

  std::array<double, 5> total{};
  for (const auto& e : per_cell) {
    for (std::size_t i = 0; i < 5; ++i) total[i] += e[i];
  }
  return {std::sqrt(total[0]), std::sqrt(total[1]), std::sqrt(total[2]), std::sqrt(total[3]), std::sqrt(total[4])};
}

FieldErrors exact_norms(const PolygonalMesh& mesh, int k, const ManufacturedCase& mc, double t) {
  return error_norms(mesh, k, Eigen::VectorXd::Zero(DofLayout(mesh, k).total()), mc, t);
}

double convergence_rate(double e_prev, double e, double h_prev, double h) {
  return std::log(e / e_prev) / std::log(h / h_prev);
}

double fitted_rate(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2) throw InvalidArgument("need at least two (h, e) pairs");
  const std::size_t m = h.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += std::log(h[i]);
    sy += std::log(e[i]);
  }
  const double mx = sx / static_cast<double>(m);
  const double my = sy / static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(e[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t f = 0; f < 5; ++f) {
      rows[i].rates[f] = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : convergence_rate(rows[i - 1].errors.as_array()[f], rows[i].errors.as_array()[f],
                                                   rows[i - 1].h, rows[i].h);
    }
  }
}

std::array<double, 5> fitted_rates(const std::vector<ConvergenceRow>& rows) {
  std::vector<double> h;
  for (const auto& r : rows) h.push_back(r.h);
  std::array<double, 5> out{};
  for (std::size_t f = 0; f < 5; ++f) {
    std::vector<double> e;
    for (const auto& r : rows) e.push_back(r.errors.as_array()[f]);
    out[f] = fitted_rate(h, e);
  }
  return out;
}

const std::array<const char*, 5> kFieldNames{"sig0", "sig1", "v", "r", "div"};

}  // namespace zvem
