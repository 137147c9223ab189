#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "aaipp/linalg.hpp"

namespace aaipp::mesh {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryTag { Lid, Wall };

struct BoundaryEdge {
  std::array<Index, 2> vertices;
  BoundaryTag tag = BoundaryTag::Wall;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conforming triangulation with counterclockwise triangles.
struct TriMesh {
  std::vector<Point> points;
  std::vector<std::array<Index, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  std::size_t num_vertices() const { return points.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  /// Signed area of triangle t (positive for counterclockwise orientation).
  double signed_area(std::size_t t) const;
  double total_area() const;
};

/// Unique undirected edges as (min, max) vertex pairs, sorted lexicographically.
std::vector<std::array<Index, 2>> unique_edges(const TriMesh& m);

/// Checks orientation, conformity (each edge used by at most two triangles,
/// boundary edges by exactly one) and that boundary edges match the edges
/// used by a single triangle. Throws MeshError on violation.
void validate(const TriMesh& m);

/// (n+1)^2 grid vertices on [0,1]^2, every cell split along its
/// bottom-left to top-right diagonal. Boundary edges are tagged Wall.
TriMesh structured_unit_square(int n);

/// Alfeld split: every triangle replaced by three triangles meeting at its barycenter.
TriMesh barycentric_refine(const TriMesh& m);

/// Edges on y = 1 become Lid, all other boundary edges Wall.
TriMesh tag_cavity_boundary(TriMesh m);

/// Legacy ASCII VTK unstructured grid of the triangulation.
void write_vtk(const TriMesh& m, std::ostream& os);

}  // namespace aaipp::mesh
