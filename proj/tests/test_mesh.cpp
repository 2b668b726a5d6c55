#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <doctest.h>

#include "support.hpp"
#include "zvem/errors.hpp"
#include "zvem/mesh.hpp"
#include "zvem/quadrature.hpp"

using namespace zvem;

namespace {

double total_area(const PolygonalMesh& mesh) {
  double a = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) a += cell_geometry(mesh, c).area;
  return a;
}

// Interface points 0 < y < 1 that belong to exactly one of the two column grids.
std::size_t brute_force_hanging(int n_left, int n_right) {
  std::set<long> left, right;
  for (long j = 1; j < 2 * n_left; ++j) left.insert(j * 2 * n_right);
  for (long j = 1; j < 2 * n_right; ++j) right.insert(j * 2 * n_left);
  std::set<long> all(left);
  all.insert(right.begin(), right.end());
  std::size_t shared = 0;
  for (long y : left) shared += right.count(y);
  return all.size() - shared;
}

}  // namespace

TEST_CASE("cartesian counts") {
  const PolygonalMesh m = generate_cartesian(2);
  CHECK(m.num_vertices() == 9);
  CHECK(m.num_cells() == 4);
  CHECK(m.num_edges() == 12);

  const PolygonalMesh one = generate_cartesian(1);
  REQUIRE(one.num_cells() == 1);
  const CellGeometry g = cell_geometry(one, 0);
  CHECK(g.area == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("cartesian n=6 diameter and reported side") {
  const PolygonalMesh m = generate_cartesian(6);
  CHECK(max_cell_diameter(m) == doctest::Approx(std::sqrt(2.0) / 6.0).epsilon(1e-12));
  CHECK(1.0 / 6.0 == doctest::Approx(0.167).epsilon(1e-2));
}

TEST_CASE("generators partition the unit square") {
  for (int n : {1, 2, 3, 4, 7, 10}) {
    CHECK(std::abs(total_area(generate_cartesian(n)) - 1.0) <= 1e-12);
    if (n >= 2) CHECK(std::abs(total_area(generate_hexagonal(n)) - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(generate_hexagonal(1), InvalidArgument);
  for (auto [l, r] : {std::pair{1, 2}, {2, 3}, {2, 4}, {3, 2}, {4, 6}}) {
    CHECK(std::abs(total_area(generate_partitioned(l, r)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("hexagonal interior cells are hexagons and Euler holds") {
  const PolygonalMesh m = generate_hexagonal(4);
  int interior = 0;
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
    bool touches = false;
    for (const auto& ref : m.cell_edges(c)) touches = touches || m.edge(ref.edge).is_boundary();
    if (!touches) {
      ++interior;
      CHECK(m.cell(c).size() == 6);
      CHECK(m.cell_edges(c).size() == 6);
    }
  }
  CHECK(interior > 0);
  const long v = static_cast<long>(m.num_vertices());
  const long e = static_cast<long>(m.num_edges());
  const long c = static_cast<long>(m.num_cells());
  CHECK(v - e + c == 1);
}

TEST_CASE("partitioned mesh hanging nodes") {
  const PolygonalMesh m = generate_partitioned(1, 2);
  std::size_t five = 0;
  for (const auto& loop : m.cells()) five += loop.size() == 5 ? 1 : 0;
  CHECK(five >= 1);

  for (auto [l, r] : {std::pair{1, 2}, {2, 4}, {2, 3}, {3, 5}, {4, 6}}) {
    const PolygonalMesh p = generate_partitioned(l, r);
    CHECK(count_hanging_nodes(p) == brute_force_hanging(l, r));
    CHECK(static_cast<long>(p.num_vertices()) - static_cast<long>(p.num_edges()) +
              static_cast<long>(p.num_cells()) ==
          1);
  }
  CHECK_THROWS_AS(generate_partitioned(2, 2), InvalidArgument);
  CHECK_THROWS_AS(generate_partitioned(0, 2), InvalidArgument);
}

TEST_CASE("cell geometry") {
  const PolygonalMesh unit = testing::unit_square_cell();
  CellGeometry g = cell_geometry(unit, 0);
  CHECK(g.area == doctest::Approx(1.0));
  CHECK((g.centroid - Point(0.5, 0.5)).norm() <= 1e-14);
  CHECK(g.diameter == doctest::Approx(std::sqrt(2.0)));

  const PolygonalMesh half = testing::single_cell({{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}});
  g = cell_geometry(half, 0);
  CHECK(g.area == doctest::Approx(0.25));
  CHECK(g.diameter == doctest::Approx(std::sqrt(2.0) / 2.0));

  const double r = 0.7;
  std::vector<Point> hex;
  for (int i = 0; i < 6; ++i) hex.emplace_back(0.3 + r * std::cos(i * M_PI / 3), -0.1 + r * std::sin(i * M_PI / 3));
  const PolygonalMesh hm = testing::single_cell(hex);
  g = cell_geometry(hm, 0);
  const double exact = 1.5 * std::sqrt(3.0) * r * r;
  CHECK(g.area == doctest::Approx(exact).epsilon(1e-13));
  CHECK(cell_quadrature(g, 0).total_weight() == doctest::Approx(exact).epsilon(1e-13));
  CHECK(g.diameter == doctest::Approx(2 * r).epsilon(1e-13));
}

TEST_CASE("degenerate cell is rejected") {
  CHECK_THROWS(testing::single_cell({{0, 0}, {1, 0}, {2, 0}}));
}

TEST_CASE("boundary tagging") {
  const PolygonalMesh m = generate_cartesian(3);
  for (const Edge& e : m.edges()) {
    const Point a = m.vertex(e.v[0]);
    const Point b = m.vertex(e.v[1]);
    if (!e.is_boundary()) {
      CHECK(e.tag == BoundaryTag::Interior);
    } else if ((std::abs(a.x()) < 1e-12 && std::abs(b.x()) < 1e-12) ||
               (std::abs(a.y()) < 1e-12 && std::abs(b.y()) < 1e-12)) {
      CHECK(e.tag == BoundaryTag::GammaSigma);
    } else {
      CHECK(e.tag == BoundaryTag::GammaU);
    }
  }
  const PolygonalMesh d = m.retagged(all_dirichlet_tagging());
  for (const Edge& e : d.edges()) CHECK((!e.is_boundary() || e.tag == BoundaryTag::GammaU));
}

TEST_CASE("boundary normals point outward") {
  for (const PolygonalMesh& m : {generate_cartesian(3), generate_hexagonal(3), generate_partitioned(1, 2)}) {
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
      const CellGeometry g = cell_geometry(m, c);
      Point flux = Point::Zero();
      for (const auto& e : g.edges) {
        flux += e.length * e.outward_normal;
        CHECK((e.midpoint - g.centroid).dot(e.outward_normal) > 0.0);
        if (m.edge(e.edge).is_boundary()) {
          CHECK(e.sign == 1);
        }
      }
      CHECK(flux.norm() <= 1e-13);
    }
  }
}

TEST_CASE("vemmesh round trip") {
  for (const PolygonalMesh& m : {generate_cartesian(2), generate_hexagonal(3), generate_partitioned(2, 3)}) {
    std::stringstream s;
    write_mesh(s, m);
    const PolygonalMesh back = read_mesh(s);
    CHECK(back == m);
  }
}

TEST_CASE("vemmesh rejects bad files") {
  const std::string missing_vertex =
      "vemmesh 1\n4 1 4\n0 0\n1 0\n1 1\n0 1\n4 0 1 2 7\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n";
  std::istringstream a(missing_vertex);
  CHECK_THROWS_AS(read_mesh(a), ValidationError);

  const std::string untagged = "vemmesh 1\n4 1 4\n0 0\n1 0\n1 1\n0 1\n4 0 1 2 3\n0 1 1\n1 2 0\n2 3 1\n3 0 2\n";
  std::istringstream b(untagged);
  CHECK_THROWS_AS(read_mesh(b), ValidationError);

  std::istringstream c("vemmesh 2\n");
  CHECK_THROWS_AS(read_mesh(c), ParseError);
}

TEST_CASE("locate cell and quality report") {
  const PolygonalMesh m = generate_cartesian(9);
  const int c = locate_cell(m, Point(0.5, 0.5));
  REQUIRE(c >= 0);
  const CellGeometry g = cell_geometry(m, c);
  CHECK((g.centroid - Point(0.5, 0.5)).norm() <= 1e-12);
  CHECK(locate_cell(m, Point(1.5, 0.5)) == -1);

  const MeshQualityReport q = quality_report(generate_hexagonal(4));
  CHECK(q.total_area == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.max_vertices >= 6);
  CHECK(q.min_edge_ratio > 0.0);
  CHECK(q.min_inradius_ratio > 0.0);
}
