#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "zvem/errors.hpp"
#include "zvem/mesh.hpp"

namespace zvem {

namespace {

/// Merges points closer than `tol` into one vertex. Bins of size `tol` are
/// probed in a 3x3 neighbourhood so merging does not depend on bin edges.
class VertexPool {
public:
  explicit VertexPool(double tol) : tol_(tol) {}

  int insert(const Point& p) {
    const long bx = std::lround(std::floor(p.x() / tol_));
    const long by = std::lround(std::floor(p.y() / tol_));
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = bins_.find(key(bx + dx, by + dy));
        if (it == bins_.end()) continue;
        for (int id : it->second) {
          if ((points_[static_cast<std::size_t>(id)] - p).norm() <= tol_) return id;
        }
      }
    }
    const int id = static_cast<int>(points_.size());
    points_.push_back(p);
    bins_[key(bx, by)].push_back(id);
    return id;
  }

  const std::vector<Point>& points() const noexcept { return points_; }
  std::vector<Point> release() { return std::move(points_); }

private:
  static long long key(long x, long y) { return (static_cast<long long>(x) << 32) ^ (y & 0xffffffffLL); }

  double tol_;
  std::vector<Point> points_;
  std::unordered_map<long long, std::vector<int>> bins_;
};

using Polygon = std::vector<Point>;

/// One Sutherland-Hodgman pass against the half-plane {p : dot(normal, p) <= offset}.
Polygon clip_half_plane(const Polygon& poly, const Point& normal, double offset) {
  Polygon out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point& cur = poly[i];
    const Point& next = poly[(i + 1) % m];
    const double dc = normal.dot(cur) - offset;
    const double dn = normal.dot(next) - offset;
    const bool in_c = dc <= 0.0;
    const bool in_n = dn <= 0.0;
    if (in_c) out.push_back(cur);
    if (in_c != in_n) {
      const double t = dc / (dc - dn);
      Point x = cur + t * (next - cur);
      // snap onto the clip line exactly
      if (normal.x() != 0.0) x.x() = offset / normal.x();
      if (normal.y() != 0.0) x.y() = offset / normal.y();
      out.push_back(x);
    }
  }
  return out;
}

Polygon clip_unit_square(Polygon poly) {
  poly = clip_half_plane(poly, Point(-1.0, 0.0), 0.0);
  if (poly.size() >= 3) poly = clip_half_plane(poly, Point(1.0, 0.0), 1.0);
  if (poly.size() >= 3) poly = clip_half_plane(poly, Point(0.0, -1.0), 0.0);
  if (poly.size() >= 3) poly = clip_half_plane(poly, Point(0.0, 1.0), 1.0);
  return poly;
}

std::vector<int> to_loop(VertexPool& pool, const Polygon& poly) {
  std::vector<int> loop;
  for (const Point& p : poly) {
    const int id = pool.insert(p);
    if (loop.empty() || loop.back() != id) loop.push_back(id);
  }
  while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
  return loop;
}

}  // namespace

PolygonalMesh generate_cartesian(int n, const TaggingRule& rule) {
  if (n < 1) throw InvalidArgument("cartesian mesh needs n >= 1");
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return PolygonalMesh(std::move(vertices), std::move(cells), rule);
}

PolygonalMesh generate_hexagonal(int n, const TaggingRule& rule) {
  if (n < 2) throw InvalidArgument("hexagonal mesh needs n >= 2");
  // Rows of hexagons with horizontal pitch w = 1/n; odd rows shifted by w/2.
  // The row spacing is 1/m with m the integer closest to the regular value
  // 2n/sqrt(3), so the first and last rows are cut through their centres.
  const double w = 1.0 / n;
  const int m = std::max(1, static_cast<int>(std::lround(2.0 * n / std::sqrt(3.0))));
  const double s = 1.0 / m;

  VertexPool pool(1e-10 * std::sqrt(2.0));
  std::vector<std::vector<int>> cells;
  for (int j = 0; j <= m; ++j) {
    const double cy = j * s;
    const bool odd = (j % 2) == 1;
    const int count = odd ? n + 1 : n;
    for (int i = 0; i < count; ++i) {
      const double cx = odd ? i * w : (i + 0.5) * w;
      Polygon hex = {
          {cx, cy - 2.0 * s / 3.0},     {cx + 0.5 * w, cy - s / 3.0}, {cx + 0.5 * w, cy + s / 3.0},
          {cx, cy + 2.0 * s / 3.0},     {cx - 0.5 * w, cy + s / 3.0}, {cx - 0.5 * w, cy - s / 3.0},
      };
      const Polygon clipped = clip_unit_square(hex);
      if (clipped.size() < 3 || signed_area(clipped) < 1e-12) continue;
      auto loop = to_loop(pool, clipped);
      if (loop.size() < 3) continue;
      cells.push_back(std::move(loop));
    }
  }
  return PolygonalMesh(pool.release(), std::move(cells), rule);
}

PolygonalMesh generate_partitioned(int n_left, int n_right, const TaggingRule& rule) {
  if (n_left < 1 || n_right < 1) throw InvalidArgument("partitioned mesh needs sizes >= 1");
  if (n_left == n_right) throw InvalidArgument("partitioned mesh needs n_left != n_right");

  VertexPool pool(1e-10 * std::sqrt(2.0));
  std::vector<std::vector<int>> cells;

  auto add_block = [&](double x0, int n) {
    const double side = 1.0 / (2.0 * n);
    for (int j = 0; j < 2 * n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double xa = x0 + i * side;
        const double xb = (i + 1 == n) ? x0 + 0.5 : x0 + (i + 1) * side;
        const double ya = j * side;
        const double yb = (j + 1 == 2 * n) ? 1.0 : (j + 1) * side;
        cells.push_back({pool.insert({xa, ya}), pool.insert({xb, ya}), pool.insert({xb, yb}),
                         pool.insert({xa, yb})});
      }
    }
  };
  add_block(0.0, n_left);
  add_block(0.5, n_right);

  const auto& pts = pool.points();
  std::vector<int> interface;
  for (int v = 0; v < static_cast<int>(pts.size()); ++v) {
    if (std::abs(pts[static_cast<std::size_t>(v)].x() - 0.5) < 1e-12) interface.push_back(v);
  }

  // Insert interface vertices that fall strictly inside a cell edge.
  for (auto& loop : cells) {
    std::vector<int> refined;
    const std::size_t m = loop.size();
    for (std::size_t i = 0; i < m; ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % m];
      refined.push_back(a);
      const Point& pa = pts[static_cast<std::size_t>(a)];
      const Point& pb = pts[static_cast<std::size_t>(b)];
      if (std::abs(pa.x() - 0.5) > 1e-12 || std::abs(pb.x() - 0.5) > 1e-12) continue;
      std::vector<std::pair<double, int>> inner;
      for (int v : interface) {
        const double t = (pts[static_cast<std::size_t>(v)].y() - pa.y()) / (pb.y() - pa.y());
        if (t > 1e-12 && t < 1.0 - 1e-12) inner.emplace_back(t, v);
      }
      std::sort(inner.begin(), inner.end());
      for (const auto& [t, v] : inner) refined.push_back(v);
    }
    loop = std::move(refined);
  }
  return PolygonalMesh(pool.release(), std::move(cells), rule);
}

}  // namespace zvem
