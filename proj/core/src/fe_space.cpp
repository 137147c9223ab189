#include "aaipp/fe_space.hpp"

#include <algorithm>
#include <cmath>

namespace aaipp::fem {

namespace {

// Rows = row_nodes adjacency lists expanded by `row_block` x `col_block` components.
CsrMatrix pattern_from_adjacency(const std::vector<std::vector<Index>>& adj, Index ncols_scalar,
                                 int row_block, int col_block) {
  const auto nrows = static_cast<Index>(adj.size()) * row_block;
  std::vector<Index> offsets(static_cast<std::size_t>(nrows) + 1, 0);
  std::vector<Index> cols;
  std::size_t total = 0;
  for (const auto& a : adj) total += a.size();
  cols.reserve(total * row_block * col_block);
  for (std::size_t a = 0; a < adj.size(); ++a) {
    for (int c = 0; c < row_block; ++c) {
      for (Index b : adj[a])
        for (int d = 0; d < col_block; ++d) cols.push_back(b * col_block + d);
      offsets[a * row_block + c + 1] = static_cast<Index>(cols.size());
    }
  }
  std::vector<double> vals(cols.size(), 0.0);
  return CsrMatrix(nrows, ncols_scalar * col_block, std::move(offsets), std::move(cols), std::move(vals));
}

void sort_unique(std::vector<std::vector<Index>>& adj) {
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
}

}  // namespace

mesh::Point ElementGeometry::map(const std::array<double, 3>& l) const {
  return {l[0] * vertices[0].x + l[1] * vertices[1].x + l[2] * vertices[2].x,
          l[0] * vertices[0].y + l[1] * vertices[1].y + l[2] * vertices[2].y};
}

std::array<double, 6> p2_values(const std::array<double, 3>& l) {
  return {l[0] * (2.0 * l[0] - 1.0), l[1] * (2.0 * l[1] - 1.0), l[2] * (2.0 * l[2] - 1.0),
          4.0 * l[0] * l[1],         4.0 * l[1] * l[2],         4.0 * l[2] * l[0]};
}

std::array<Vec2, 6> p2_gradients(const std::array<double, 3>& l, const ElementGeometry& geo) {
  const auto& g = geo.grad_lambda;
  std::array<Vec2, 6> out;
  for (int i = 0; i < 3; ++i) {
    const double s = 4.0 * l[i] - 1.0;
    out[i] = {s * g[i].x, s * g[i].y};
  }
  const std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {1, 2}, {2, 0}}};
  for (int e = 0; e < 3; ++e) {
    const int a = pairs[e][0], b = pairs[e][1];
    out[3 + e] = {4.0 * (l[a] * g[b].x + l[b] * g[a].x), 4.0 * (l[a] * g[b].y + l[b] * g[a].y)};
  }
  return out;
}

FeSpace::FeSpace(mesh::TriMesh m) : mesh_(std::move(m)) {
  mesh::validate(mesh_);
  edges_ = mesh::unique_edges(mesh_);
  const Index nv = num_vertices();

  nodes_ = mesh_.points;
  nodes_.reserve(mesh_.points.size() + edges_.size());
  for (const auto& e : edges_) {
    const auto& a = mesh_.points[e[0]];
    const auto& b = mesh_.points[e[1]];
    nodes_.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }

  element_nodes_.reserve(mesh_.triangles.size());
  for (const auto& tri : mesh_.triangles) {
    std::array<Index, 6> nodes{tri[0], tri[1], tri[2], 0, 0, 0};
    for (int e = 0; e < 3; ++e) nodes[3 + e] = edge_node(tri[e], tri[(e + 1) % 3]);
    element_nodes_.push_back(nodes);
  }

  std::vector<std::vector<Index>> node_adj(nodes_.size());
  std::vector<std::vector<Index>> vertex_adj(static_cast<std::size_t>(nv));
  std::vector<std::vector<Index>> vertex_node_adj(static_cast<std::size_t>(nv));
  for (std::size_t t = 0; t < element_nodes_.size(); ++t) {
    const auto& en = element_nodes_[t];
    const auto& tri = mesh_.triangles[t];
    for (Index a : en) node_adj[a].insert(node_adj[a].end(), en.begin(), en.end());
    for (Index a : tri) {
      vertex_adj[a].insert(vertex_adj[a].end(), tri.begin(), tri.end());
      vertex_node_adj[a].insert(vertex_node_adj[a].end(), en.begin(), en.end());
    }
  }
  sort_unique(node_adj);
  sort_unique(vertex_adj);
  sort_unique(vertex_node_adj);
  vector_pattern_ = pattern_from_adjacency(node_adj, num_scalar(), 2, 2);
  p1_pattern_ = pattern_from_adjacency(vertex_adj, nv, 1, 1);
  p1_vector_pattern_ = pattern_from_adjacency(vertex_node_adj, num_scalar(), 1, 2);
}

Index FeSpace::edge_node(Index a, Index b) const {
  const std::array<Index, 2> key = a < b ? std::array{a, b} : std::array{b, a};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return num_vertices() + static_cast<Index>(it - edges_.begin());
}

ElementGeometry FeSpace::geometry(std::size_t t) const {
  const auto& tri = mesh_.triangles[t];
  ElementGeometry g;
  for (int i = 0; i < 3; ++i) g.vertices[i] = mesh_.points[tri[i]];
  const auto& p0 = g.vertices[0];
  const auto& p1 = g.vertices[1];
  const auto& p2 = g.vertices[2];
  const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  g.area = 0.5 * det;
  // lambda_1 and lambda_2 are the reference coordinates; invert the Jacobian.
  g.grad_lambda[1] = {(p2.y - p0.y) / det, -(p2.x - p0.x) / det};
  g.grad_lambda[2] = {-(p1.y - p0.y) / det, (p1.x - p0.x) / det};
  g.grad_lambda[0] = {-g.grad_lambda[1].x - g.grad_lambda[2].x, -g.grad_lambda[1].y - g.grad_lambda[2].y};
  return g;
}

std::vector<std::pair<Index, mesh::BoundaryTag>> FeSpace::boundary_nodes() const {
  std::vector<int> state(nodes_.size(), -1);  // -1 none, 0 wall, 1 lid
  for (const auto& be : mesh_.boundary_edges) {
    const int v = be.tag == mesh::BoundaryTag::Lid ? 1 : 0;
    for (Index n : {be.vertices[0], be.vertices[1], edge_node(be.vertices[0], be.vertices[1])})
      state[n] = std::max(state[n], v);
  }
  std::vector<std::pair<Index, mesh::BoundaryTag>> out;
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state[i] >= 0)
      out.emplace_back(static_cast<Index>(i), state[i] == 1 ? mesh::BoundaryTag::Lid : mesh::BoundaryTag::Wall);
  return out;
}

FeSpace build_space(const mesh::TriMesh& m) { return FeSpace(m); }

std::vector<double> interpolate(const FeSpace& s, const VectorField& f) {
  std::vector<double> u(static_cast<std::size_t>(s.num_vector()));
  for (Index i = 0; i < s.num_scalar(); ++i) {
    const auto& p = s.node(i);
    const Vec2 v = f(p.x, p.y);
    u[FeSpace::dof(i, 0)] = v.x;
    u[FeSpace::dof(i, 1)] = v.y;
  }
  return u;
}

std::vector<double> interpolate_p1(const FeSpace& s, const ScalarField& f) {
  std::vector<double> q(static_cast<std::size_t>(s.num_vertices()));
  for (Index i = 0; i < s.num_vertices(); ++i) q[i] = f(s.node(i).x, s.node(i).y);
  return q;
}

Vec2 evaluate(const FeSpace& s, std::span<const double> u, std::size_t t, const std::array<double, 3>& l) {
  const auto phi = p2_values(l);
  const auto& en = s.element_nodes(t);
  Vec2 v;
  for (int a = 0; a < 6; ++a) {
    v.x += phi[a] * u[FeSpace::dof(en[a], 0)];
    v.y += phi[a] * u[FeSpace::dof(en[a], 1)];
  }
  return v;
}

Grad2 evaluate_gradient(const FeSpace& s, std::span<const double> u, std::size_t t,
                        const std::array<double, 3>& l) {
  const auto geo = s.geometry(t);
  const auto dphi = p2_gradients(l, geo);
  const auto& en = s.element_nodes(t);
  Grad2 g;
  for (int a = 0; a < 6; ++a) {
    const double ux = u[FeSpace::dof(en[a], 0)], uy = u[FeSpace::dof(en[a], 1)];
    g.dx.x += dphi[a].x * ux;
    g.dx.y += dphi[a].x * uy;
    g.dy.x += dphi[a].y * ux;
    g.dy.y += dphi[a].y * uy;
  }
  return g;
}

DirichletData cavity_dirichlet(const FeSpace& s) {
  DirichletData bc;
  for (const auto& [node, tag] : s.boundary_nodes()) {
    const double lid = tag == mesh::BoundaryTag::Lid ? 1.0 : 0.0;
    bc.dofs.push_back(FeSpace::dof(node, 0));
    bc.values.push_back(lid);
    bc.dofs.push_back(FeSpace::dof(node, 1));
    bc.values.push_back(0.0);
  }
  return bc;
}

DirichletData boundary_dirichlet(const FeSpace& s, const VectorField& g) {
  DirichletData bc;
  for (const auto& [node, tag] : s.boundary_nodes()) {
    const auto& p = s.node(node);
    const Vec2 v = g(p.x, p.y);
    bc.dofs.push_back(FeSpace::dof(node, 0));
    bc.values.push_back(v.x);
    bc.dofs.push_back(FeSpace::dof(node, 1));
    bc.values.push_back(v.y);
  }
  return bc;
}

std::vector<double> boundary_lift(const FeSpace& s, const DirichletData& bc) {
  std::vector<double> u(static_cast<std::size_t>(s.num_vector()), 0.0);
  for (std::size_t k = 0; k < bc.dofs.size(); ++k) u[bc.dofs[k]] = bc.values[k];
  return u;
}

}  // namespace aaipp::fem
