#include <cmath>
#include <random>

#include <doctest.h>

#include "support.hpp"
#include "zvem/errors.hpp"
#include "zvem/quadrature.hpp"

using namespace zvem;

namespace {

double integrate(const QuadratureRule& rule, const std::function<double(const Point&)>& f) {
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * f(rule.points[q]);
  return s;
}

// Green's theorem: int_K x^a y^b = 1/(a+1) oint x^(a+1) y^b n_x, edge integrals by Simpson
// refinement of a polynomial of known degree (exact for degree <= 3 per panel).
double green_monomial(const std::vector<Point>& loop, int a, int b) {
  double total = 0.0;
  const std::size_t m = loop.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point p = loop[i];
    const Point q = loop[(i + 1) % m];
    const double ny_len = q.y() - p.y();  // n_x * |edge|
    auto g = [&](double t) {
      const Point x = p + t * (q - p);
      return std::pow(x.x(), a + 1) * std::pow(x.y(), b);
    };
    const int panels = 4000;
    double s = 0.0;
    for (int j = 0; j < panels; ++j) {
      const double t0 = static_cast<double>(j) / panels;
      const double t1 = static_cast<double>(j + 1) / panels;
      s += (t1 - t0) / 6.0 * (g(t0) + 4.0 * g(0.5 * (t0 + t1)) + g(t1));
    }
    total += s * ny_len;
  }
  return total / (a + 1);
}

}  // namespace

TEST_CASE("unit square integrals") {
  const CellGeometry g = cell_geometry(testing::unit_square_cell(), 0);
  const QuadratureRule rule = cell_quadrature(g, 4);
  CHECK(integrate(rule, [](const Point&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(integrate(rule, [](const Point& x) { return x.x() - 0.5; })) <= 1e-15);
  CHECK(integrate(rule, [](const Point& x) { return x.x() * x.x() * x.y() * x.y(); }) ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("edge integrals") {
  const EdgeQuadrature half = edge_quadrature(Point(0.2, 0.1), Point(0.5, 0.5), 0);
  double len = 0.0;
  for (double w : half.weights) len += w;
  CHECK(len == doctest::Approx(0.5).epsilon(1e-15));

  const EdgeQuadrature e = edge_quadrature(Point(0.0, 0.0), Point(1.0, 0.0), 4);
  double first = 0.0, square = 0.0;
  for (std::size_t q = 0; q < e.size(); ++q) {
    first += e.weights[q] * e.params[q];
    square += e.weights[q] * e.points[q].x() * e.points[q].x();
  }
  CHECK(std::abs(first) <= 1e-16);
  CHECK(square == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (std::size_t q = 0; q < e.size(); ++q) {
    CHECK((e.points[q] - Point(0.5 + e.params[q], 0.0)).norm() <= 1e-15);
  }
}

TEST_CASE("gauss-legendre exactness") {
  for (int n = 1; n <= 8; ++n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    REQUIRE(x.size() == static_cast<std::size_t>(n));
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], d);
      const double exact = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(s - exact) <= 1e-14);
    }
  }
  std::vector<double> x, w;
  CHECK_THROWS_AS(gauss_legendre(0, x, w), InvalidArgument);
}

TEST_CASE("triangle rule exactness") {
  const Point a(0.1, -0.2), b(1.3, 0.4), c(0.2, 0.9);
  for (int order = 0; order <= 10; ++order) {
    const QuadratureRule rule = triangle_quadrature(a, b, c, order);
    for (int p = 0; p <= order; ++p) {
      for (int q = 0; p + q <= order; ++q) {
        const double s = integrate(rule, [&](const Point& x) { return std::pow(x.x(), p) * std::pow(x.y(), q); });
        const double exact = green_monomial({a, b, c}, p, q);
        CHECK(std::abs(s - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

TEST_CASE("random polygons integrate monomials exactly") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 3 + trial % 6;
    const auto loop = testing::random_polygon(rng, m);
    const CellGeometry g = cell_geometry(testing::single_cell(loop), 0);
    const int order = 6;
    const QuadratureRule rule = cell_quadrature(g, order);
    for (int p = 0; p <= order; ++p) {
      for (int q = 0; p + q <= order; ++q) {
        const double s = integrate(rule, [&](const Point& x) { return std::pow(x.x(), p) * std::pow(x.y(), q); });
        const double exact = green_monomial(loop, p, q);
        CHECK(std::abs(s - exact) <= 1e-11 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

TEST_CASE("non-star-shaped polygon falls back to ear clipping") {
  // Arrow head: the centroid lies outside the notch, so the fan is invalid.
  const std::vector<Point> loop{{0, 0}, {2, 0}, {2, 2}, {1.9, 2}, {1.9, 0.1}, {0, 0.1}};
  const CellGeometry g = cell_geometry(testing::single_cell(loop), 0);
  const QuadratureRule rule = cell_quadrature(g, 3);
  CHECK(rule.total_weight() == doctest::Approx(g.area).epsilon(1e-13));
  for (const Point& p : rule.points) {
    const bool in_bottom = p.y() >= 0.0 && p.y() <= 0.1 && p.x() >= 0.0 && p.x() <= 2.0;
    const bool in_right = p.x() >= 1.9 && p.x() <= 2.0 && p.y() >= 0.0 && p.y() <= 2.0;
    CHECK((in_bottom || in_right));
  }
  const double xy = integrate(rule, [](const Point& x) { return x.x() * x.y(); });
  CHECK(xy == doctest::Approx(green_monomial(loop, 1, 1)).epsilon(1e-12));
  CHECK(ear_clip(loop).size() == loop.size() - 2);
}

TEST_CASE("negative order is rejected") {
  CHECK_THROWS_AS(triangle_quadrature(Point(0, 0), Point(1, 0), Point(0, 1), -1), InvalidArgument);
  CHECK_THROWS_AS(edge_quadrature(Point(0, 0), Point(1, 0), -1), InvalidArgument);
}
