#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "aaipp/linalg.hpp"
#include "aaipp/mesh.hpp"

namespace aaipp::fem {

using linalg::CsrMatrix;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Grad2 {
  Vec2 dx;  // derivatives of (u_x, u_y) with respect to x
  Vec2 dy;  // ... and with respect to y
};

using VectorField = std::function<Vec2(double, double)>;
using ScalarField = std::function<double(double, double)>;

/// Affine element data: area and the (constant) gradients of the barycentric coordinates.
struct ElementGeometry {
  double area = 0.0;
  std::array<Vec2, 3> grad_lambda;
  std::array<mesh::Point, 3> vertices;

  mesh::Point map(const std::array<double, 3>& lambda) const;
};

/// Local P2 basis ordering: the three vertices, then the midpoints of the
/// edges (0,1), (1,2) and (2,0).
std::array<double, 6> p2_values(const std::array<double, 3>& lambda);
std::array<Vec2, 6> p2_gradients(const std::array<double, 3>& lambda, const ElementGeometry& geo);

/// Continuous P2 vector Lagrange space. Scalar nodes are the mesh vertices
/// followed by the edge midpoints (edges sorted by endpoint pair); vector
/// degrees of freedom are interleaved, node i owning 2i and 2i+1.
class FeSpace {
 public:
  explicit FeSpace(mesh::TriMesh m);

  const mesh::TriMesh& mesh() const { return mesh_; }
  Index num_vertices() const { return static_cast<Index>(mesh_.points.size()); }
  Index num_scalar() const { return static_cast<Index>(nodes_.size()); }
  Index num_vector() const { return 2 * num_scalar(); }
  std::size_t num_elements() const { return mesh_.triangles.size(); }

  static Index dof(Index node, int component) { return 2 * node + component; }

  const std::array<Index, 6>& element_nodes(std::size_t t) const { return element_nodes_[t]; }
  const mesh::Point& node(Index i) const { return nodes_[i]; }
  std::span<const std::array<Index, 2>> edges() const { return edges_; }
  /// Scalar node index of the midpoint of edge (a, b), or -1.
  Index edge_node(Index a, Index b) const;

  ElementGeometry geometry(std::size_t t) const;

  /// Zero-valued sparsity patterns shared by all assembled operators.
  const CsrMatrix& vector_pattern() const { return vector_pattern_; }
  const CsrMatrix& p1_pattern() const { return p1_pattern_; }
  const CsrMatrix& p1_vector_pattern() const { return p1_vector_pattern_; }

  /// Scalar nodes on boundary edges, each paired with the edge tag. Nodes
  /// touching a Lid edge report Lid.
  std::vector<std::pair<Index, mesh::BoundaryTag>> boundary_nodes() const;

 private:
  mesh::TriMesh mesh_;
  std::vector<mesh::Point> nodes_;
  std::vector<std::array<Index, 2>> edges_;
  std::vector<std::array<Index, 6>> element_nodes_;
  CsrMatrix vector_pattern_;
  CsrMatrix p1_pattern_;
  CsrMatrix p1_vector_pattern_;
};

FeSpace build_space(const mesh::TriMesh& m);

/// Nodal interpolant of a vector field.
std::vector<double> interpolate(const FeSpace& s, const VectorField& f);

/// P1 interpolant on mesh vertices.
std::vector<double> interpolate_p1(const FeSpace& s, const ScalarField& f);

/// Value and gradient of the discrete field u on element t at barycentric point lambda.
Vec2 evaluate(const FeSpace& s, std::span<const double> u, std::size_t t,
              const std::array<double, 3>& lambda);
Grad2 evaluate_gradient(const FeSpace& s, std::span<const double> u, std::size_t t,
                        const std::array<double, 3>& lambda);

struct DirichletData {
  std::vector<Index> dofs;      // unique, ascending
  std::vector<double> values;   // same length as dofs
};

/// Lid-driven cavity data: every node on a Lid edge gets (1, 0), every other
/// boundary node (0, 0). Lid corners therefore carry the lid velocity.
DirichletData cavity_dirichlet(const FeSpace& s);

/// All boundary nodes prescribed by g.
DirichletData boundary_dirichlet(const FeSpace& s, const VectorField& g);

/// Lifting of the Dirichlet data: prescribed values on constrained dofs, zero elsewhere.
std::vector<double> boundary_lift(const FeSpace& s, const DirichletData& bc);

}  // namespace aaipp::fem
