#include "zvem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "zvem/errors.hpp"

namespace zvem {

double QuadratureRule::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one point");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p = 1.0, p_prev = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p_prev2 = p_prev;
        p_prev = p;
        p = ((2.0 * j - 1.0) * x * p_prev - (j - 1.0) * p_prev2) / j;
      }
      dp = n * (x * p - p_prev) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

QuadratureRule triangle_quadrature(const Point& a, const Point& b, const Point& c, int order) {
  if (order < 0) throw InvalidArgument("quadrature order must be >= 0");
  // x(u, w) = a + u (b - a) + u w (c - b), |J| = 2|T| u; the integrand gains
  // one degree in u from the Jacobian.
  const int n = (order + 3) / 2;
  std::vector<double> xg, wg;
  gauss_legendre(n, xg, wg);
  const double area2 = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
  QuadratureRule rule;
  rule.order = order;
  rule.points.reserve(static_cast<std::size_t>(n * n));
  rule.weights.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (xg[static_cast<std::size_t>(i)] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double w = 0.5 * (xg[static_cast<std::size_t>(j)] + 1.0);
      rule.points.push_back(a + u * (b - a) + u * w * (c - b));
      rule.weights.push_back(0.25 * wg[static_cast<std::size_t>(i)] * wg[static_cast<std::size_t>(j)] *
                             area2 * u);
    }
  }
  return rule;
}

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

bool inside_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
  return cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 && cross(a - c, p - c) >= 0.0;
}

void append(QuadratureRule& dst, const QuadratureRule& src) {
  dst.points.insert(dst.points.end(), src.points.begin(), src.points.end());
  dst.weights.insert(dst.weights.end(), src.weights.begin(), src.weights.end());
}

}  // namespace

std::vector<std::array<int, 3>> ear_clip(std::span<const Point> loop) {
  std::vector<int> idx(loop.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::array<int, 3>> tris;
  double scale = 0.0;
  for (const auto& p : loop) scale = std::max(scale, p.norm());
  const double tol = 1e-14 * std::max(scale * scale, 1e-300);

  while (idx.size() > 3) {
    bool clipped = false;
    const std::size_t m = idx.size();
    for (std::size_t i = 0; i < m && !clipped; ++i) {
      const int ip = idx[(i + m - 1) % m];
      const int ic = idx[i];
      const int in = idx[(i + 1) % m];
      const Point& a = loop[static_cast<std::size_t>(ip)];
      const Point& b = loop[static_cast<std::size_t>(ic)];
      const Point& c = loop[static_cast<std::size_t>(in)];
      if (cross(b - a, c - b) <= tol) continue;  // reflex or straight
      bool empty = true;
      for (std::size_t j = 0; j < m && empty; ++j) {
        const int q = idx[j];
        if (q == ip || q == ic || q == in) continue;
        if (inside_triangle(loop[static_cast<std::size_t>(q)], a, b, c)) empty = false;
      }
      if (!empty) continue;
      tris.push_back({ip, ic, in});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
    }
    if (!clipped) {
      // No ear left: drop a straight-angle vertex and retry.
      bool dropped = false;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const std::size_t mm = idx.size();
        const Point& a = loop[static_cast<std::size_t>(idx[(i + mm - 1) % mm])];
        const Point& b = loop[static_cast<std::size_t>(idx[i])];
        const Point& c = loop[static_cast<std::size_t>(idx[(i + 1) % mm])];
        if (std::abs(cross(b - a, c - b)) <= tol) {
          idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
          dropped = true;
          break;
        }
      }
      if (!dropped) throw DegenerateCell("ear clipping failed: polygon is not simple");
    }
  }
  if (idx.size() == 3) {
    const Point& a = loop[static_cast<std::size_t>(idx[0])];
    const Point& b = loop[static_cast<std::size_t>(idx[1])];
    const Point& c = loop[static_cast<std::size_t>(idx[2])];
    if (cross(b - a, c - a) > tol) tris.push_back({idx[0], idx[1], idx[2]});
  }
  if (tris.empty()) throw DegenerateCell("ear clipping produced no triangles");
  return tris;
}

QuadratureRule ear_clipping_quadrature(std::span<const Point> loop, int order) {
  QuadratureRule rule;
  rule.order = order;
  for (const auto& t : ear_clip(loop)) {
    append(rule, triangle_quadrature(loop[static_cast<std::size_t>(t[0])],
                                     loop[static_cast<std::size_t>(t[1])],
                                     loop[static_cast<std::size_t>(t[2])], order));
  }
  return rule;
}

QuadratureRule cell_quadrature(const CellGeometry& cell, int order) {
  if (order < 0) throw InvalidArgument("quadrature order must be >= 0");
  const auto& loop = cell.loop;
  const std::size_t m = loop.size();
  const double tol = 1e-12 * cell.diameter * cell.diameter;
  bool star = true;
  for (std::size_t i = 0; i < m && star; ++i) {
    const double a2 = cross(loop[i] - cell.centroid, loop[(i + 1) % m] - cell.centroid);
    if (a2 <= tol) star = false;
  }
  if (!star) return ear_clipping_quadrature(loop, order);

  QuadratureRule rule;
  rule.order = order;
  for (std::size_t i = 0; i < m; ++i) {
    append(rule, triangle_quadrature(cell.centroid, loop[i], loop[(i + 1) % m], order));
  }
  return rule;
}

EdgeQuadrature edge_quadrature(const Point& a, const Point& b, int order) {
  if (order < 0) throw InvalidArgument("quadrature order must be >= 0");
  const int n = (order + 2) / 2;  // ceil((order + 1) / 2)
  std::vector<double> xg, wg;
  gauss_legendre(n, xg, wg);
  const double length = (b - a).norm();
  const Point mid = 0.5 * (a + b);
  EdgeQuadrature q;
  q.order = order;
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * xg[static_cast<std::size_t>(i)];
    q.params.push_back(s);
    q.points.push_back(mid + s * (b - a));
    q.weights.push_back(0.5 * wg[static_cast<std::size_t>(i)] * length);
  }
  return q;
}

EdgeQuadrature edge_quadrature(const LocalEdgeGeometry& edge, int order) {
  const Point half = 0.5 * edge.length * edge.tangent;
  return edge_quadrature(edge.midpoint - half, edge.midpoint + half, order);
}

}  // namespace zvem
