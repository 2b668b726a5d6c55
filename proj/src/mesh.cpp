#include "zvem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "zvem/errors.hpp"

namespace zvem {

namespace {

constexpr double kOnBoundary = 1e-12;

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  const double scale = (p2 - p1).norm() * (q2 - q1).norm();
  const double tol = 1e-14 * scale;
  if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
      ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol))) {
    return true;
  }
  auto on_segment = [&](const Point& a, const Point& b, const Point& p, double d) {
    return std::abs(d) <= tol && p.x() >= std::min(a.x(), b.x()) - 1e-14 &&
           p.x() <= std::max(a.x(), b.x()) + 1e-14 && p.y() >= std::min(a.y(), b.y()) - 1e-14 &&
           p.y() <= std::max(a.y(), b.y()) + 1e-14;
  };
  return on_segment(q1, q2, p1, d1) || on_segment(q1, q2, p2, d2) ||
         on_segment(p1, p2, q1, d3) || on_segment(p1, p2, q2, d4);
}

}  // namespace

TaggingRule default_tagging() {
  return [](const Point& a, const Point& b) {
    const bool left = std::abs(a.x()) < kOnBoundary && std::abs(b.x()) < kOnBoundary;
    const bool bottom = std::abs(a.y()) < kOnBoundary && std::abs(b.y()) < kOnBoundary;
    return (left || bottom) ? BoundaryTag::GammaSigma : BoundaryTag::GammaU;
  };
}

TaggingRule all_dirichlet_tagging() {
  return [](const Point&, const Point&) { return BoundaryTag::GammaU; };
}

double signed_area(std::span<const Point> loop) {
  double a = 0.0;
  const std::size_t m = loop.size();
  for (std::size_t i = 0; i < m; ++i) a += cross(loop[i], loop[(i + 1) % m]);
  return 0.5 * a;
}

PolygonalMesh::PolygonalMesh(std::vector<Point> vertices, std::vector<std::vector<int>> cells,
                             const TaggingRule& rule)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  build_edges();
  for (auto& e : edges_) {
    if (e.is_boundary()) e.tag = rule(vertex(e.v[0]), vertex(e.v[1]));
  }
  validate();
}

PolygonalMesh PolygonalMesh::retagged(const TaggingRule& rule) const {
  PolygonalMesh copy = *this;
  for (auto& e : copy.edges_) {
    if (e.is_boundary()) e.tag = rule(vertex(e.v[0]), vertex(e.v[1]));
  }
  copy.validate();
  return copy;
}

void PolygonalMesh::set_tag(int e, BoundaryTag tag) { edges_.at(static_cast<std::size_t>(e)).tag = tag; }

void PolygonalMesh::build_edges() {
  const int nv = static_cast<int>(vertices_.size());
  std::map<std::pair<int, int>, int> index;
  edges_.clear();
  cell_edges_.assign(cells_.size(), {});
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& loop = cells_[c];
    if (loop.size() < 3) {
      throw ValidationError("cell " + std::to_string(c) + " has fewer than 3 vertices");
    }
    for (int v : loop) {
      if (v < 0 || v >= nv) {
        throw ValidationError("cell " + std::to_string(c) + " references missing vertex " +
                              std::to_string(v));
      }
    }
    const std::size_t m = loop.size();
    for (std::size_t i = 0; i < m; ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % m];
      if (a == b) throw ValidationError("cell " + std::to_string(c) + " repeats a vertex");
      const auto key = std::minmax(a, b);
      auto [it, inserted] = index.try_emplace({key.first, key.second}, static_cast<int>(edges_.size()));
      if (inserted) {
        Edge e;
        e.v = {a, b};
        e.cells = {static_cast<int>(c), -1};
        edges_.push_back(e);
        cell_edges_[c].push_back({it->second, 1});
      } else {
        Edge& e = edges_[static_cast<std::size_t>(it->second)];
        if (e.cells[1] >= 0) {
          throw ValidationError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                ") is shared by more than two cells");
        }
        if (e.v[0] == a) {
          throw ValidationError("cells " + std::to_string(e.cells[0]) + " and " + std::to_string(c) +
                                " traverse a shared edge in the same direction");
        }
        e.cells[1] = static_cast<int>(c);
        cell_edges_[c].push_back({it->second, -1});
      }
    }
  }
}

void PolygonalMesh::validate() const {
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& loop = cells_[c];
    std::vector<Point> pts;
    pts.reserve(loop.size());
    for (int v : loop) pts.push_back(vertex(v));
    std::set<int> unique(loop.begin(), loop.end());
    if (unique.size() != loop.size()) {
      throw ValidationError("cell " + std::to_string(c) + " repeats a vertex");
    }
    if (signed_area(pts) <= 1e-14) {
      throw ValidationError("cell " + std::to_string(c) + " is not counter-clockwise with positive area");
    }
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 2; j < m; ++j) {
        if (i == 0 && j == m - 1) continue;
        if (segments_intersect(pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m])) {
          throw ValidationError("cell " + std::to_string(c) + " is self-intersecting");
        }
      }
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.is_boundary() && edge.tag == BoundaryTag::Interior) {
      throw ValidationError("boundary edge " + std::to_string(e) + " is untagged");
    }
    if (!edge.is_boundary() && edge.tag != BoundaryTag::Interior) {
      throw ValidationError("interior edge " + std::to_string(e) + " carries a boundary tag");
    }
  }
}

bool PolygonalMesh::operator==(const PolygonalMesh& other) const {
  if (vertices_.size() != other.vertices_.size() || cells_ != other.cells_ ||
      edges_.size() != other.edges_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i] != other.vertices_[i]) return false;
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].v != other.edges_[e].v || edges_[e].cells != other.edges_[e].cells ||
        edges_[e].tag != other.edges_[e].tag) {
      return false;
    }
  }
  return true;
}

CellGeometry cell_geometry(const PolygonalMesh& mesh, int cell) {
  CellGeometry g;
  const auto loop = mesh.cell(cell);
  for (int v : loop) g.loop.push_back(mesh.vertex(v));
  const std::size_t m = g.loop.size();

  double a2 = 0.0;
  Point c = Point::Zero();
  for (std::size_t i = 0; i < m; ++i) {
    const Point& p = g.loop[i];
    const Point& q = g.loop[(i + 1) % m];
    const double w = cross(p, q);
    a2 += w;
    c += w * (p + q);
  }
  g.area = 0.5 * a2;
  if (g.area <= 1e-14) {
    throw DegenerateCell("cell " + std::to_string(cell) + " has non-positive area");
  }
  g.centroid = c / (3.0 * a2);

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      g.diameter = std::max(g.diameter, (g.loop[i] - g.loop[j]).norm());
    }
  }

  const auto refs = mesh.cell_edges(cell);
  g.edges.reserve(refs.size());
  for (const auto& ref : refs) {
    const Edge& e = mesh.edge(ref.edge);
    const Point& a = mesh.vertex(e.v[0]);
    const Point& b = mesh.vertex(e.v[1]);
    LocalEdgeGeometry le;
    le.edge = ref.edge;
    le.sign = ref.sign;
    le.length = (b - a).norm();
    le.midpoint = 0.5 * (a + b);
    le.tangent = (b - a) / le.length;
    le.normal = Point(le.tangent.y(), -le.tangent.x());
    le.outward_normal = static_cast<double>(ref.sign) * le.normal;
    g.edges.push_back(le);
  }
  return g;
}

MeshQualityReport quality_report(const PolygonalMesh& mesh) {
  MeshQualityReport r;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const CellGeometry g = cell_geometry(mesh, c);
    double perimeter = 0.0;
    for (const auto& e : g.edges) {
      perimeter += e.length;
      r.min_edge_ratio = std::min(r.min_edge_ratio, e.length / g.diameter);
    }
    r.min_inradius_ratio = std::min(r.min_inradius_ratio, 2.0 * g.area / perimeter / g.diameter);
    r.max_vertices = std::max(r.max_vertices, g.loop.size());
    r.total_area += g.area;
    r.max_diameter = std::max(r.max_diameter, g.diameter);
  }
  return r;
}

double max_cell_diameter(const PolygonalMesh& mesh) { return quality_report(mesh).max_diameter; }

int locate_cell(const PolygonalMesh& mesh, const Point& p) {
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const auto loop = mesh.cell(c);
    const std::size_t m = loop.size();
    bool inside = true;
    // Cells produced here are convex or have straight-angle vertices only,
    // so a half-plane test per edge is sufficient.
    for (std::size_t i = 0; i < m && inside; ++i) {
      const Point& a = mesh.vertex(loop[i]);
      const Point& b = mesh.vertex(loop[(i + 1) % m]);
      if (cross(b - a, p - a) < -1e-12 * (b - a).norm()) inside = false;
    }
    if (inside) return c;
  }
  return -1;
}

std::size_t count_hanging_nodes(const PolygonalMesh& mesh) {
  std::set<int> hanging;
  for (const auto& loop : mesh.cells()) {
    const std::size_t m = loop.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Point& prev = mesh.vertex(loop[(i + m - 1) % m]);
      const Point& cur = mesh.vertex(loop[i]);
      const Point& next = mesh.vertex(loop[(i + 1) % m]);
      const Point u = prev - cur;
      const Point w = next - cur;
      if (std::abs(cross(u, w)) <= 1e-12 * u.norm() * w.norm() && u.dot(w) < 0.0) {
        hanging.insert(loop[i]);
      }
    }
  }
  return hanging.size();
}

}  // namespace zvem
