#pragma once

#include <array>
#include <span>
#include <vector>

#include "zvem/mesh.hpp"

namespace zvem {

/// Points and area (or length) weights. Exact for polynomials up to `order`.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int order = 0;

  std::size_t size() const noexcept { return points.size(); }
  double total_weight() const;
};

/// Edge rule in the edge's global parametrisation x(s) = midpoint + s*length*tangent,
/// s in [-1/2, 1/2]. Weights are length-weighted.
struct EdgeQuadrature {
  std::vector<double> params;
  std::vector<Point> points;
  std::vector<double> weights;
  int order = 0;

  std::size_t size() const noexcept { return points.size(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Collapsed (Duffy) Gauss rule on a triangle; exact up to `order`.
QuadratureRule triangle_quadrature(const Point& a, const Point& b, const Point& c, int order);

/// Triangles of an ear-clipping triangulation of a counter-clockwise loop.
std::vector<std::array<int, 3>> ear_clip(std::span<const Point> loop);

/// Fan triangulation from the centroid; falls back to ear clipping when the
/// polygon is not star-shaped with respect to its centroid.
/// Throws DegenerateCell if neither works.
QuadratureRule cell_quadrature(const CellGeometry& cell, int order);
QuadratureRule ear_clipping_quadrature(std::span<const Point> loop, int order);

EdgeQuadrature edge_quadrature(const Point& a, const Point& b, int order);
EdgeQuadrature edge_quadrature(const LocalEdgeGeometry& edge, int order);

}  // namespace zvem
