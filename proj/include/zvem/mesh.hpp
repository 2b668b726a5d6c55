#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace zvem {

using Point = Eigen::Vector2d;

enum class BoundaryTag : int { Interior = 0, GammaU = 1, GammaSigma = 2 };

/// Decides the tag of a boundary edge from its two endpoints.
using TaggingRule = std::function<BoundaryTag(const Point& a, const Point& b)>;

/// Traction boundary on {x = 0} and {y = 0} of the unit square, velocity elsewhere.
TaggingRule default_tagging();
/// Whole boundary carries velocity (displacement) data.
TaggingRule all_dirichlet_tagging();

/// An edge with a fixed global orientation a -> b. The global normal is the
/// tangent rotated clockwise; for boundary edges it points out of the domain.
struct Edge {
  std::array<int, 2> v{};
  std::array<int, 2> cells{-1, -1};
  BoundaryTag tag = BoundaryTag::Interior;

  bool is_boundary() const noexcept { return cells[1] < 0; }
};

/// Local edge of a cell: edge i of the loop goes from loop[i] to loop[i+1].
/// `sign` is +1 when the cell traverses the edge along its global orientation.
struct CellEdgeRef {
  int edge = -1;
  int sign = 1;
};

/// Immutable polygonal mesh. Cells are counter-clockwise vertex loops.
class PolygonalMesh {
public:
  PolygonalMesh() = default;

  /// Builds the edge table from the loops and tags boundary edges with `rule`.
  /// Throws ValidationError if any mesh invariant fails.
  PolygonalMesh(std::vector<Point> vertices, std::vector<std::vector<int>> cells,
                const TaggingRule& rule);

  /// Same mesh geometry with boundary tags recomputed by `rule`.
  PolygonalMesh retagged(const TaggingRule& rule) const;

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_cells() const noexcept { return cells_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const std::vector<std::vector<int>>& cells() const noexcept { return cells_; }
  std::span<const int> cell(int c) const { return cells_[static_cast<std::size_t>(c)]; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::span<const CellEdgeRef> cell_edges(int c) const {
    return cell_edges_[static_cast<std::size_t>(c)];
  }

  /// Replaces the tag of edge `e`; used by the file reader only.
  void set_tag(int e, BoundaryTag tag);
  /// Re-checks every invariant (tags included). Throws ValidationError.
  void validate() const;

  bool operator==(const PolygonalMesh& other) const;

private:
  void build_edges();

  std::vector<Point> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<Edge> edges_;
  std::vector<std::vector<CellEdgeRef>> cell_edges_;
};

struct LocalEdgeGeometry {
  int edge = -1;
  int sign = 1;
  double length = 0.0;
  Point midpoint = Point::Zero();
  Point tangent = Point::Zero();        // global orientation
  Point normal = Point::Zero();         // global normal
  Point outward_normal = Point::Zero(); // sign * normal
};

struct CellGeometry {
  double area = 0.0;
  Point centroid = Point::Zero();
  double diameter = 0.0;
  std::vector<Point> loop;  // vertex coordinates, counter-clockwise
  std::vector<LocalEdgeGeometry> edges;
};

/// Throws DegenerateCell when the shoelace area is <= 1e-14.
CellGeometry cell_geometry(const PolygonalMesh& mesh, int cell);

double signed_area(std::span<const Point> loop);

struct MeshQualityReport {
  double min_edge_ratio = 1.0;      // min h_F / h_K
  double min_inradius_ratio = 1.0;  // min (2|K|/perimeter) / h_K
  std::size_t max_vertices = 0;
  double total_area = 0.0;
  double max_diameter = 0.0;
};

MeshQualityReport quality_report(const PolygonalMesh& mesh);

/// Max cell diameter.
double max_cell_diameter(const PolygonalMesh& mesh);

/// Index of the first cell whose closure contains `p`, or -1.
int locate_cell(const PolygonalMesh& mesh, const Point& p);

/// Vertices that sit at a straight angle in at least one cell loop.
std::size_t count_hanging_nodes(const PolygonalMesh& mesh);

// Generators on the unit square. All are deterministic.
PolygonalMesh generate_cartesian(int n, const TaggingRule& rule = default_tagging());
PolygonalMesh generate_hexagonal(int n, const TaggingRule& rule = default_tagging());
PolygonalMesh generate_partitioned(int n_left, int n_right,
                                   const TaggingRule& rule = default_tagging());

// "vemmesh 1" text format.
void write_mesh(std::ostream& out, const PolygonalMesh& mesh);
void write_mesh(const std::string& path, const PolygonalMesh& mesh);
PolygonalMesh read_mesh(std::istream& in);
PolygonalMesh read_mesh(const std::string& path);

}  // namespace zvem
