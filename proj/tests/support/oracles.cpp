#include "oracles.hpp"

#include <cmath>

namespace oracle {

using aaipp::Index;

namespace {

// Golub-Welsch on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    w[i] = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

}  // namespace

TriangleRule conical_rule(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  TriangleRule r;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (1.0 + x[i]);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (1.0 + x[j]);
      const double px = u, py = v * (1.0 - u);
      r.lambda.push_back({1.0 - px - py, px, py});
      // 0.25 from the interval maps, (1 - u) from the collapse, 2 = 1/area.
      r.weights.push_back(0.25 * w[i] * w[j] * (1.0 - u) * 2.0);
    }
  }
  return r;
}

double reference_monomial(int a, int b) {
  return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

LocalBasis local_basis(const FeSpace& s, std::size_t t, const std::array<double, 3>& l) {
  const auto& tri = s.mesh().triangles[t];
  const auto& p0 = s.mesh().points[tri[0]];
  const auto& p1 = s.mesh().points[tri[1]];
  const auto& p2 = s.mesh().points[tri[2]];
  const double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  const Vec2 g[3] = {{(p1.y - p2.y) / det, (p2.x - p1.x) / det},
                     {(p2.y - p0.y) / det, (p0.x - p2.x) / det},
                     {(p0.y - p1.y) / det, (p1.x - p0.x) / det}};
  LocalBasis b;
  b.area = 0.5 * det;
  b.point = {l[0] * p0.x + l[1] * p1.x + l[2] * p2.x, l[0] * p0.y + l[1] * p1.y + l[2] * p2.y};
  for (int i = 0; i < 3; ++i) {
    b.value[i] = l[i] * (2.0 * l[i] - 1.0);
    b.grad[i] = {(4.0 * l[i] - 1.0) * g[i].x, (4.0 * l[i] - 1.0) * g[i].y};
  }
  const int ea[3] = {0, 1, 2}, eb[3] = {1, 2, 0};
  for (int e = 0; e < 3; ++e) {
    const int a = ea[e], c = eb[e];
    b.value[3 + e] = 4.0 * l[a] * l[c];
    b.grad[3 + e] = {4.0 * (l[a] * g[c].x + l[c] * g[a].x), 4.0 * (l[a] * g[c].y + l[c] * g[a].y)};
  }
  return b;
}

Vec2 field_value(const FeSpace& s, std::span<const double> u, std::size_t t, const LocalBasis& b) {
  Vec2 v;
  const auto& nodes = s.element_nodes(t);
  for (int i = 0; i < 6; ++i) {
    v.x += u[2 * nodes[i]] * b.value[i];
    v.y += u[2 * nodes[i] + 1] * b.value[i];
  }
  return v;
}

Grad2 field_gradient(const FeSpace& s, std::span<const double> u, std::size_t t, const LocalBasis& b) {
  Grad2 g;
  const auto& nodes = s.element_nodes(t);
  for (int i = 0; i < 6; ++i) {
    const double ux = u[2 * nodes[i]], uy = u[2 * nodes[i] + 1];
    g.dx.x += ux * b.grad[i].x;
    g.dy.x += ux * b.grad[i].y;
    g.dx.y += uy * b.grad[i].x;
    g.dy.y += uy * b.grad[i].y;
  }
  return g;
}

double integrate(const FeSpace& s, const std::function<double(std::size_t, const LocalBasis&)>& fn, int n) {
  const auto rule = conical_rule(n);
  double sum = 0.0;
  for (std::size_t t = 0; t < s.num_elements(); ++t)
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto b = local_basis(s, t, rule.lambda[q]);
      sum += rule.weights[q] * b.area * fn(t, b);
    }
  return sum;
}

double integral_grad_squared(const FeSpace& s, std::span<const double> u) {
  return integrate(s, [&](std::size_t t, const LocalBasis& b) {
    const auto g = field_gradient(s, u, t, b);
    return g.dx.x * g.dx.x + g.dx.y * g.dx.y + g.dy.x * g.dy.x + g.dy.y * g.dy.y;
  });
}

double integral_div_squared(const FeSpace& s, std::span<const double> u) {
  return integrate(s, [&](std::size_t t, const LocalBasis& b) {
    const auto g = field_gradient(s, u, t, b);
    const double d = g.dx.x + g.dy.y;
    return d * d;
  });
}

double integral_l2_squared(const FeSpace& s, std::span<const double> u) {
  return integrate(s, [&](std::size_t t, const LocalBasis& b) {
    const auto v = field_value(s, u, t, b);
    return v.x * v.x + v.y * v.y;
  });
}

double skew_trilinear(const FeSpace& s, std::span<const double> w, std::span<const double> u,
                      std::span<const double> v) {
  return integrate(s, [&](std::size_t t, const LocalBasis& b) {
    const auto wv = field_value(s, w, t, b);
    const auto uv = field_value(s, u, t, b);
    const auto vv = field_value(s, v, t, b);
    const auto gu = field_gradient(s, u, t, b);
    const auto gv = field_gradient(s, v, t, b);
    const Vec2 wgu{wv.x * gu.dx.x + wv.y * gu.dy.x, wv.x * gu.dx.y + wv.y * gu.dy.y};
    const Vec2 wgv{wv.x * gv.dx.x + wv.y * gv.dy.x, wv.x * gv.dx.y + wv.y * gv.dy.y};
    return 0.5 * (wgu.x * vv.x + wgu.y * vv.y) - 0.5 * (wgv.x * uv.x + wgv.y * uv.y);
  });
}

std::vector<double> load_vector(const FeSpace& s, const aaipp::fem::VectorField& f) {
  std::vector<double> out(s.num_vector(), 0.0);
  const auto rule = conical_rule(7);
  for (std::size_t t = 0; t < s.num_elements(); ++t) {
    const auto& nodes = s.element_nodes(t);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto b = local_basis(s, t, rule.lambda[q]);
      const Vec2 fv = f(b.point.x, b.point.y);
      const double w = rule.weights[q] * b.area;
      for (int i = 0; i < 6; ++i) {
        out[2 * nodes[i]] += w * fv.x * b.value[i];
        out[2 * nodes[i] + 1] += w * fv.y * b.value[i];
      }
    }
  }
  return out;
}

std::vector<double> random_vector(std::size_t n, std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// ---------------------------------------------------------------------------

CoupledOracle::CoupledOracle(const FeSpace& s, double nu_, double eps_, std::vector<double> load_,
                             aaipp::fem::DirichletData bc_)
    : space(s), nu(nu_), eps(eps_), load(std::move(load_)), bc(std::move(bc_)) {
  const Index nv = s.num_vector();
  const auto ne = static_cast<Index>(s.num_elements());
  stiffness = Eigen::MatrixXd::Zero(nv, nv);
  divergence = Eigen::MatrixXd::Zero(3 * ne, nv);
  pmass = Eigen::MatrixXd::Zero(3 * ne, 3 * ne);
  const auto rule = conical_rule(5);
  for (Index t = 0; t < ne; ++t) {
    const auto& nodes = s.element_nodes(t);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& l = rule.lambda[q];
      const auto b = local_basis(s, t, l);
      const double w = rule.weights[q] * b.area;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
          const double a = w * (b.grad[i].x * b.grad[j].x + b.grad[i].y * b.grad[j].y);
          stiffness(2 * nodes[i], 2 * nodes[j]) += a;
          stiffness(2 * nodes[i] + 1, 2 * nodes[j] + 1) += a;
        }
      for (int a = 0; a < 3; ++a) {
        for (int j = 0; j < 6; ++j) {
          divergence(3 * t + a, 2 * nodes[j]) += w * l[a] * b.grad[j].x;
          divergence(3 * t + a, 2 * nodes[j] + 1) += w * l[a] * b.grad[j].y;
        }
        for (int c = 0; c < 3; ++c) pmass(3 * t + a, 3 * t + c) += w * l[a] * l[c];
      }
    }
  }
  u = std::vector<double>(nv, 0.0);
  for (std::size_t i = 0; i < bc.dofs.size(); ++i) u[bc.dofs[i]] = bc.values[i];
  p = Eigen::VectorXd::Zero(3 * ne);
}

Eigen::MatrixXd CoupledOracle::convection(std::span<const double> w) const {
  const Index nv = space.num_vector();
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(nv, nv);
  const auto rule = conical_rule(5);
  for (std::size_t t = 0; t < space.num_elements(); ++t) {
    const auto& nodes = space.element_nodes(t);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto b = local_basis(space, t, rule.lambda[q]);
      const double wq = rule.weights[q] * b.area;
      const Vec2 wv = field_value(space, w, t, b);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
          // (w . grad psi_j) psi_i, per component, skew-symmetrized
          const double c = wq * 0.5 *
                           ((wv.x * b.grad[j].x + wv.y * b.grad[j].y) * b.value[i] -
                            (wv.x * b.grad[i].x + wv.y * b.grad[i].y) * b.value[j]);
          n(2 * nodes[i], 2 * nodes[j]) += c;
          n(2 * nodes[i] + 1, 2 * nodes[j] + 1) += c;
        }
    }
  }
  return n;
}

void CoupledOracle::step() {
  const Index nv = space.num_vector();
  const auto np = static_cast<Index>(p.size());
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(nv + np, nv + np);
  sys.topLeftCorner(nv, nv) = nu * stiffness + convection(u);
  sys.topRightCorner(nv, np) = -divergence.transpose();
  sys.bottomLeftCorner(np, nv) = divergence;
  sys.bottomRightCorner(np, np) = eps * pmass;
  Eigen::VectorXd rhs(nv + np);
  for (Index i = 0; i < nv; ++i) rhs(i) = load[i];
  rhs.tail(np) = eps * pmass * p;
  for (std::size_t i = 0; i < bc.dofs.size(); ++i) {
    const Index d = bc.dofs[i];
    sys.row(d).setZero();
    sys(d, d) = 1.0;
    rhs(d) = bc.values[i];
  }
  const Eigen::VectorXd x = sys.partialPivLu().solve(rhs);
  for (Index i = 0; i < nv; ++i) u[i] = x(i);
  p = x.tail(np);
  ++k;
}

double CoupledOracle::pressure_norm(const Eigen::VectorXd& q) const { return std::sqrt(q.dot(pmass * q)); }

std::vector<double> CoupledOracle::continuous_projection(const Eigen::VectorXd& q) const {
  const Index nvert = space.num_vertices();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nvert, nvert);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nvert);
  Eigen::VectorXd lumped = Eigen::VectorXd::Zero(nvert);
  for (std::size_t t = 0; t < space.num_elements(); ++t) {
    const auto& tri = space.mesh().triangles[t];
    for (int a = 0; a < 3; ++a) {
      for (int c = 0; c < 3; ++c) {
        const double mac = pmass(3 * t + a, 3 * t + c);
        m(tri[a], tri[c]) += mac;
        rhs(tri[a]) += mac * q(3 * t + c);
        lumped(tri[a]) += mac;
      }
    }
  }
  Eigen::VectorXd x = m.ldlt().solve(rhs);
  const double mean = lumped.dot(x) / lumped.sum();
  std::vector<double> out(nvert);
  for (Index i = 0; i < nvert; ++i) out[i] = x(i) - mean;
  return out;
}

}  // namespace oracle
