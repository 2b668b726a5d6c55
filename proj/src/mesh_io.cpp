#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "zvem/errors.hpp"
#include "zvem/mesh.hpp"

namespace zvem {

void write_mesh(std::ostream& out, const PolygonalMesh& mesh) {
  out << "vemmesh 1\n";
  out << mesh.num_vertices() << ' ' << mesh.num_cells() << ' ' << mesh.num_edges() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const Point& p : mesh.vertices()) out << p.x() << ' ' << p.y() << '\n';
  for (const auto& loop : mesh.cells()) {
    out << loop.size();
    for (int v : loop) out << ' ' << v;
    out << '\n';
  }
  for (const Edge& e : mesh.edges()) {
    out << e.v[0] << ' ' << e.v[1] << ' ' << static_cast<int>(e.tag) << '\n';
  }
}

void write_mesh(const std::string& path, const PolygonalMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_mesh(out, mesh);
  if (!out) throw std::runtime_error("failed writing " + path);
}

namespace {

class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next(const char* expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw ParseError(line_no_ + 1, std::string("unexpected end of file, expecting ") + expecting);
  }

  std::size_t line() const noexcept { return line_no_; }

private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

template <typename T>
T take(std::istringstream& ls, const LineReader& reader, const char* what) {
  T value{};
  if (!(ls >> value)) throw ParseError(reader.line(), std::string("expected ") + what);
  return value;
}

void expect_end(std::istringstream& ls, const LineReader& reader) {
  std::string extra;
  if (ls >> extra) throw ParseError(reader.line(), "trailing token '" + extra + "'");
}

}  // namespace

PolygonalMesh read_mesh(std::istream& in) {
  LineReader reader(in);
  {
    auto ls = reader.next("header");
    const auto magic = take<std::string>(ls, reader, "'vemmesh'");
    const auto version = take<int>(ls, reader, "format version");
    if (magic != "vemmesh" || version != 1) throw ParseError(reader.line(), "header must be 'vemmesh 1'");
    expect_end(ls, reader);
  }
  long nv = 0, nc = 0, ne = 0;
  {
    auto ls = reader.next("counts");
    nv = take<long>(ls, reader, "vertex count");
    nc = take<long>(ls, reader, "cell count");
    ne = take<long>(ls, reader, "edge count");
    if (nv < 0 || nc < 0 || ne < 0) throw ParseError(reader.line(), "negative count");
    expect_end(ls, reader);
  }

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    auto ls = reader.next("vertex");
    const double x = take<double>(ls, reader, "x coordinate");
    const double y = take<double>(ls, reader, "y coordinate");
    expect_end(ls, reader);
    vertices.emplace_back(x, y);
  }

  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(nc));
  for (long c = 0; c < nc; ++c) {
    auto ls = reader.next("cell");
    const int m = take<int>(ls, reader, "cell vertex count");
    if (m < 3) throw ParseError(reader.line(), "cell needs at least 3 vertices");
    std::vector<int> loop(static_cast<std::size_t>(m));
    for (auto& v : loop) v = take<int>(ls, reader, "vertex index");
    expect_end(ls, reader);
    cells.push_back(std::move(loop));
  }

  std::map<std::pair<int, int>, int> tags;
  for (long e = 0; e < ne; ++e) {
    auto ls = reader.next("edge");
    const int a = take<int>(ls, reader, "edge vertex");
    const int b = take<int>(ls, reader, "edge vertex");
    const int t = take<int>(ls, reader, "edge tag");
    expect_end(ls, reader);
    if (t < 0 || t > 2) throw ParseError(reader.line(), "edge tag must be 0, 1 or 2");
    if (a < 0 || b < 0 || a >= nv || b >= nv) {
      throw ValidationError("edge on line " + std::to_string(reader.line()) +
                            " references a missing vertex");
    }
    if (!tags.emplace(std::minmax(a, b), t).second) {
      throw ValidationError("edge on line " + std::to_string(reader.line()) + " is listed twice");
    }
  }

  // Provisional tags; the file's tags replace them below and are re-validated.
  PolygonalMesh mesh(std::move(vertices), std::move(cells), all_dirichlet_tagging());

  if (static_cast<long>(mesh.num_edges()) != ne) {
    throw ValidationError("edge count " + std::to_string(ne) + " does not match the " +
                          std::to_string(mesh.num_edges()) + " edges implied by the cells");
  }
  for (int e = 0; e < static_cast<int>(mesh.num_edges()); ++e) {
    const Edge& edge = mesh.edge(e);
    auto it = tags.find(std::minmax(edge.v[0], edge.v[1]));
    if (it == tags.end()) {
      throw ValidationError("edge (" + std::to_string(edge.v[0]) + "," + std::to_string(edge.v[1]) +
                            ") of a cell is missing from the edge list");
    }
    mesh.set_tag(e, static_cast<BoundaryTag>(it->second));
  }
  mesh.validate();
  return mesh;
}

PolygonalMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_mesh(in);
}

}  // namespace zvem
