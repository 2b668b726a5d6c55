#include <cmath>

#include <doctest.h>

#include "support.hpp"
#include "zvem/errors.hpp"
#include "zvem/mms.hpp"
#include "zvem/timeloop.hpp"

using namespace zvem;

namespace {

Tensor2 stiffness(double mu, double lambda, const Tensor2& e) {
  return 2.0 * mu * e + lambda * e.trace() * Tensor2::Identity();
}

// Central differences of a time-dependent vector field in space.
Eigen::Matrix2d fd_grad(const TimeVectorField& f, const Point& x, double t, double h = 1e-5) {
  Eigen::Matrix2d g;
  for (int j = 0; j < 2; ++j) {
    Point dx = Point::Zero();
    dx[j] = h;
    g.col(j) = (f(x + dx, t) - f(x - dx, t)) / (2.0 * h);
  }
  return g;
}

Eigen::Vector2d fd_div(const TimeTensorField& f, const Point& x, double t, double h = 1e-5) {
  const Tensor2 dx = (f(x + Point(h, 0), t) - f(x - Point(h, 0), t)) / (2.0 * h);
  const Tensor2 dy = (f(x + Point(0, h), t) - f(x - Point(0, h), t)) / (2.0 * h);
  return Eigen::Vector2d(dx(0, 0) + dy(0, 1), dx(1, 0) + dy(1, 1));
}

const std::vector<Point> kSamples{{0.3, 0.2}, {0.71, 0.55}, {0.1, 0.9}};

}  // namespace

TEST_CASE("poly-t2 vanishes at t = 0") {
  const ManufacturedCase mc = build_case("poly-t2", MaterialParams::standard());
  for (const Point& x : kSamples) {
    CHECK(mc.u(x, 0.0).norm() == 0.0);
    CHECK(mc.v(x, 0.0).norm() == 0.0);
    CHECK(mc.sigma0(x, 0.0).norm() == 0.0);
    CHECK(mc.sigma1(x, 0.0).norm() == 0.0);
    CHECK(mc.rotation(x, 0.0) == 0.0);
  }
  CHECK_THROWS_AS(build_case("poly-t4", MaterialParams::standard()), InvalidArgument);
  CHECK(case_names().size() == 3);
}

TEST_CASE("memory integrals match numerical quadrature") {
  using Kind = TimeProfile::Kind;
  for (Kind kind : {Kind::Square, Kind::Cube, Kind::Cosine, Kind::Exp}) {
    const TimeProfile p{kind};
    for (double a : {0.75, 0.625, 2.0}) {
      for (double t : {0.3, 1.0, 2.5}) {
        const int n = 20000;
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
          const double t0 = t * i / n, t1 = t * (i + 1) / n, tm = 0.5 * (t0 + t1);
          auto g = [&](double r) { return std::exp(-a * (t - r)) * p.rate(r); };
          s += (t1 - t0) / 6.0 * (g(t0) + 4.0 * g(tm) + g(t1));
        }
        CHECK(p.memory(a, t) == doctest::Approx(s).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("poly-t2 deviatoric relaxation rate is mu0 / mu0'") {
  const MaterialParams p = MaterialParams::standard();
  CHECK(p.mu0 / p.mu0p == doctest::Approx(0.75));
  const ManufacturedCase mc = build_case("poly-t2", p);
  const TimeProfile square{TimeProfile::Kind::Square};
  const Point x(0.3, 0.6);
  // eps(U) of U = (x(1-x)y(1-y), 0).
  Tensor2 e = Tensor2::Zero();
  e(0, 0) = (1 - 2 * x.x()) * x.y() * (1 - x.y());
  e(0, 1) = e(1, 0) = 0.5 * x.x() * (1 - x.x()) * (1 - 2 * x.y());
  const Tensor2 dev = e - 0.5 * e.trace() * Tensor2::Identity();
  for (double t : {0.4, 1.0}) {
    const Tensor2 s = mc.sigma0(x, t);
    const Tensor2 sdev = s - 0.5 * s.trace() * Tensor2::Identity();
    CHECK((sdev - 2.0 * p.mu0 * square.memory(0.75, t) * dev).norm() <= 1e-14);
  }
}

TEST_CASE("closed-form Maxwell stress matches an RK4 integration") {
  for (const auto& name : case_names()) {
    for (const MaterialParams& p : {MaterialParams::standard(), MaterialParams::nearly_incompressible()}) {
      const ManufacturedCase mc = build_case(name, p);
      for (const Point& x : kSamples) {
        // A0 s' + A0' s = eps(v)  <=>  s' = C0 (eps(v) - A0' s).
        auto rhs = [&](double t, const Tensor2& s) {
          return stiffness(p.mu0, p.lambda0, Tensor2(mc.strain_rate(x, t) - compliance_action(p.mu0p, p.lambda0p, s)));
        };
        const double h = 1e-4;
        Tensor2 s = Tensor2::Zero();
        for (int n = 0; n < 10000; ++n) {
          const double t = n * h;
          const Tensor2 k1 = rhs(t, s);
          const Tensor2 k2 = rhs(t + 0.5 * h, s + 0.5 * h * k1);
          const Tensor2 k3 = rhs(t + 0.5 * h, s + 0.5 * h * k2);
          const Tensor2 k4 = rhs(t + h, s + h * k3);
          s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const Tensor2 exact = mc.sigma0(x, 1.0);
        CAPTURE(name);
        CHECK((s - exact).norm() <= 1e-9 * std::max(1.0, exact.norm()));
      }
    }
  }
}

TEST_CASE("manufactured fields are consistent") {
  for (const auto& name : case_names()) {
    const MaterialParams p = MaterialParams::standard();
    const ManufacturedCase mc = build_case(name, p);
    for (const Point& x : kSamples) {
      for (double t : {0.35, 1.0}) {
        CAPTURE(name);
        const Eigen::Matrix2d gu = fd_grad(mc.u, x, t);
        const Tensor2 eps = 0.5 * (gu + gu.transpose());
        CHECK((mc.sigma1(x, t) - stiffness(p.mu1, p.lambda1, eps)).norm() <= 1e-8 * (1 + mc.sigma1(x, t).norm()));
        CHECK(mc.rotation(x, t) == doctest::Approx(0.5 * (gu(0, 1) - gu(1, 0))).epsilon(1e-8).scale(1.0));

        const Eigen::Matrix2d gv = fd_grad(mc.v, x, t);
        CHECK((mc.strain_rate(x, t) - 0.5 * (gv + gv.transpose())).norm() <= 1e-8);

        const TimeTensorField total = [&](const Point& y, double s) { return Tensor2(mc.sigma0(y, s) + mc.sigma1(y, s)); };
        const Eigen::Vector2d div = fd_div(total, x, t);
        CHECK((mc.div_stress(x, t) - div).norm() <= 1e-6 * (1 + div.norm()));

        // rho v' - div sigma = rho f.
        const double dt = 1e-5;
        const Eigen::Vector2d vdot = (mc.v(x, t + dt) - mc.v(x, t - dt)) / (2 * dt);
        CHECK((p.rho * vdot - mc.div_stress(x, t) - p.rho * mc.f(x, t)).norm() <= 1e-6 * (1 + vdot.norm()));
      }
    }
  }
}

TEST_CASE("rotation sign convention for u = (-y, x)") {
  Eigen::Matrix2d g;
  g << 0.0, -1.0, 1.0, 0.0;
  CHECK(skew_coefficient(g) == -1.0);
}

TEST_CASE("errors of polynomial and zero states") {
  const PolygonalMesh mesh = generate_hexagonal(3);
  const ManufacturedCase patch = patch_case(MaterialParams::standard());
  for (int k = 1; k <= 2; ++k) {
    InitialFields init;
    init.sigma1 = [&](const Point& x) { return patch.sigma1(x, 0.0); };
    const SystemState s = initial_state(mesh, k, init);
    CHECK(error_norms(mesh, k, s.x, patch, 0.0).max() <= 1e-11);
  }

  const PolygonalMesh grid = generate_cartesian(5);
  const ManufacturedCase mc = build_case("poly-t2", MaterialParams::standard());
  const FieldErrors zero = error_norms(grid, 1, Eigen::VectorXd::Zero(DofLayout(grid, 1).total()), mc, 1.0);
  // Independent reference: tensor-product Gauss on each square.
  std::vector<double> nodes, weights;
  gauss_legendre(8, nodes, weights);
  std::array<double, 5> ref{};
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        for (std::size_t b = 0; b < nodes.size(); ++b) {
          const Point x((i + 0.5 + 0.5 * nodes[a]) / 5.0, (j + 0.5 + 0.5 * nodes[b]) / 5.0);
          const double w = weights[a] * weights[b] / 100.0;
          ref[0] += w * mc.sigma0(x, 1.0).squaredNorm();
          ref[1] += w * mc.sigma1(x, 1.0).squaredNorm();
          ref[2] += w * mc.v(x, 1.0).squaredNorm();
          ref[3] += w * 2.0 * std::pow(mc.rotation(x, 1.0), 2);
          ref[4] += w * mc.div_stress(x, 1.0).squaredNorm();
        }
      }
    }
  }
  const auto got = zero.as_array();
  for (std::size_t f = 0; f < 5; ++f) CHECK(got[f] == doctest::Approx(std::sqrt(ref[f])).epsilon(1e-12));
  const auto ex = exact_norms(grid, 1, mc, 1.0).as_array();
  for (std::size_t f = 0; f < 5; ++f) CHECK(ex[f] == got[f]);

  const auto serial = error_norms(grid, 1, Eigen::VectorXd::Zero(DofLayout(grid, 1).total()), mc, 1.0,
                                  Execution::Serial)
                          .as_array();
  for (std::size_t f = 0; f < 5; ++f) CHECK(serial[f] == got[f]);
  CHECK_THROWS_AS(error_norms(grid, 1, Eigen::VectorXd::Zero(3), mc, 1.0), InvalidArgument);
}

TEST_CASE("rates") {
  CHECK(convergence_rate(0.01, 0.0025, 0.1, 0.05) == doctest::Approx(2.0));
  const std::vector<double> h{0.2, 0.1, 0.05, 0.04};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * std::pow(x, 2.5));
  CHECK(fitted_rate(h, e) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK_THROWS_AS(fitted_rate({0.1}, {0.2}), InvalidArgument);

  std::vector<ConvergenceRow> rows(3);
  for (std::size_t i = 0; i < 3; ++i) {
    rows[i].h = h[i];
    rows[i].errors = {e[i], e[i], e[i], e[i], e[i]};
  }
  fill_rates(rows);
  CHECK(std::isnan(rows[0].rates[0]));
  CHECK(rows[2].rates[4] == doctest::Approx(2.5));
}
