#include "aaipp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

namespace aaipp::mesh {

namespace {

std::array<Index, 2> ordered(Index a, Index b) { return a < b ? std::array{a, b} : std::array{b, a}; }

constexpr double kFrameTol = 1e-12;

bool on_frame(const Point& p) {
  return std::abs(p.x) < kFrameTol || std::abs(p.x - 1.0) < kFrameTol ||
         std::abs(p.y) < kFrameTol || std::abs(p.y - 1.0) < kFrameTol;
}

}  // namespace

double TriMesh::signed_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Point& a = points[tri[0]];
  const Point& b = points[tri[1]];
  const Point& c = points[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double TriMesh::total_area() const {
  double s = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) s += signed_area(t);
  return s;
}

std::vector<std::array<Index, 2>> unique_edges(const TriMesh& m) {
  std::vector<std::array<Index, 2>> edges;
  edges.reserve(3 * m.triangles.size());
  for (const auto& tri : m.triangles)
    for (int k = 0; k < 3; ++k) edges.push_back(ordered(tri[k], tri[(k + 1) % 3]));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

void validate(const TriMesh& m) {
  const auto nv = static_cast<Index>(m.points.size());
  std::map<std::array<Index, 2>, int> use;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    for (Index v : m.triangles[t])
      if (v < 0 || v >= nv) throw MeshError("triangle " + std::to_string(t) + " has an invalid vertex");
    if (!(m.signed_area(t) > 0.0))
      throw MeshError("triangle " + std::to_string(t) + " is not positively oriented");
    const auto& tri = m.triangles[t];
    for (int k = 0; k < 3; ++k) ++use[ordered(tri[k], tri[(k + 1) % 3])];
  }
  std::size_t single = 0;
  for (const auto& [e, count] : use) {
    if (count > 2) throw MeshError("edge shared by more than two triangles");
    if (count == 1) ++single;
  }
  if (single != m.boundary_edges.size()) throw MeshError("boundary edge list does not match the mesh");
  for (const auto& be : m.boundary_edges) {
    auto it = use.find(ordered(be.vertices[0], be.vertices[1]));
    if (it == use.end() || it->second != 1) throw MeshError("boundary edge is not a boundary of the mesh");
  }
}

TriMesh structured_unit_square(int n) {
  if (n < 1) throw MeshError("structured mesh needs n >= 1");
  TriMesh m;
  const double h = 1.0 / n;
  const auto id = [n](int i, int j) { return static_cast<Index>(j * (n + 1) + i); };
  m.points.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.points.push_back({i == n ? 1.0 : i * h, j == n ? 1.0 : j * h});

  m.triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Index v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      m.triangles.push_back({v00, v10, v11});
      m.triangles.push_back({v00, v11, v01});
    }
  }

  // Counterclockwise around the frame: bottom, right, top, left.
  for (int i = 0; i < n; ++i) m.boundary_edges.push_back({{id(i, 0), id(i + 1, 0)}});
  for (int j = 0; j < n; ++j) m.boundary_edges.push_back({{id(n, j), id(n, j + 1)}});
  for (int i = n; i > 0; --i) m.boundary_edges.push_back({{id(i, n), id(i - 1, n)}});
  for (int j = n; j > 0; --j) m.boundary_edges.push_back({{id(0, j), id(0, j - 1)}});
  return m;
}

TriMesh barycentric_refine(const TriMesh& m) {
  TriMesh out;
  out.points = m.points;
  out.points.reserve(m.points.size() + m.triangles.size());
  out.triangles.reserve(3 * m.triangles.size());
  out.boundary_edges = m.boundary_edges;
  for (const auto& tri : m.triangles) {
    const Point& a = m.points[tri[0]];
    const Point& b = m.points[tri[1]];
    const Point& c = m.points[tri[2]];
    const auto center = static_cast<Index>(out.points.size());
    out.points.push_back({(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0});
    out.triangles.push_back({tri[0], tri[1], center});
    out.triangles.push_back({tri[1], tri[2], center});
    out.triangles.push_back({tri[2], tri[0], center});
  }
  return out;
}

TriMesh tag_cavity_boundary(TriMesh m) {
  for (auto& be : m.boundary_edges) {
    const Point& a = m.points[be.vertices[0]];
    const Point& b = m.points[be.vertices[1]];
    if (!on_frame(a) || !on_frame(b)) throw MeshError("boundary vertex off the unit-square frame");
    const bool lid = std::abs(a.y - 1.0) < kFrameTol && std::abs(b.y - 1.0) < kFrameTol;
    be.tag = lid ? BoundaryTag::Lid : BoundaryTag::Wall;
  }
  return m;
}

void write_vtk(const TriMesh& m, std::ostream& os) {
  os << "# vtk DataFile Version 3.0\naaipp triangulation\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os.precision(17);
  os << "POINTS " << m.points.size() << " double\n";
  for (const auto& p : m.points) os << p.x << ' ' << p.y << " 0\n";
  os << "CELLS " << m.triangles.size() << ' ' << 4 * m.triangles.size() << '\n';
  for (const auto& t : m.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "CELL_TYPES " << m.triangles.size() << '\n';
  for (std::size_t t = 0; t < m.triangles.size(); ++t) os << "5\n";
}

}  // namespace aaipp::mesh
