#include "aaipp/assembly.hpp"

#include <cmath>

#include "aaipp/quadrature.hpp"

namespace aaipp::fem {

namespace {

using Local12 = std::array<std::array<double, 12>, 12>;

std::array<Index, 12> vector_dofs(const std::array<Index, 6>& nodes) {
  std::array<Index, 12> d;
  for (int a = 0; a < 6; ++a) {
    d[2 * a] = FeSpace::dof(nodes[a], 0);
    d[2 * a + 1] = FeSpace::dof(nodes[a], 1);
  }
  return d;
}

template <std::size_t R, std::size_t C, class Local>
void scatter(CsrMatrix& a, const std::array<Index, R>& rows, const std::array<Index, C>& cols,
             const Local& local) {
  auto values = a.values();
  for (std::size_t i = 0; i < R; ++i) {
    for (std::size_t j = 0; j < C; ++j) {
      const auto p = a.find(rows[i], cols[j]);
      if (p < 0) throw linalg::DimensionError("entry outside the assembly pattern");
      values[p] += local[i][j];
    }
  }
}

// Assembles an operator whose local 12x12 block is produced by `kernel`
// from (weight*area, basis values, basis gradients).
template <class Kernel>
CsrMatrix assemble_vector_operator(const FeSpace& s, Kernel&& kernel) {
  CsrMatrix a = s.vector_pattern();
  const auto& rule = triangle_degree5();
  for (std::size_t t = 0; t < s.num_elements(); ++t) {
    const auto geo = s.geometry(t);
    Local12 local{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double wq = rule.weights[q] * geo.area;
      kernel(wq, p2_values(rule.points[q]), p2_gradients(rule.points[q], geo), local);
    }
    const auto dofs = vector_dofs(s.element_nodes(t));
    scatter(a, dofs, dofs, local);
  }
  return a;
}

}  // namespace

CsrMatrix assemble_mass(const FeSpace& s) {
  return assemble_vector_operator(s, [](double w, const auto& phi, const auto&, Local12& l) {
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        const double v = w * phi[a] * phi[b];
        l[2 * a][2 * b] += v;
        l[2 * a + 1][2 * b + 1] += v;
      }
  });
}

CsrMatrix assemble_stiffness(const FeSpace& s) {
  return assemble_vector_operator(s, [](double w, const auto&, const auto& dphi, Local12& l) {
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        const double v = w * (dphi[a].x * dphi[b].x + dphi[a].y * dphi[b].y);
        l[2 * a][2 * b] += v;
        l[2 * a + 1][2 * b + 1] += v;
      }
  });
}

CsrMatrix assemble_graddiv(const FeSpace& s) {
  return assemble_vector_operator(s, [](double w, const auto&, const auto& dphi, Local12& l) {
    // div(phi_a e_c) = d_c phi_a
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        const double da[2] = {dphi[a].x, dphi[a].y};
        const double db[2] = {dphi[b].x, dphi[b].y};
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) l[2 * a + c][2 * b + d] += w * da[c] * db[d];
      }
  });
}

void add_convection(const FeSpace& s, std::span<const double> w, double scale, CsrMatrix& target) {
  if (w.size() != static_cast<std::size_t>(s.num_vector()))
    throw linalg::DimensionError("convecting field has the wrong length");
  const auto& rule = triangle_degree5();
  for (std::size_t t = 0; t < s.num_elements(); ++t) {
    const auto geo = s.geometry(t);
    const auto& en = s.element_nodes(t);
    // c[a][b] = (w . grad phi_b, phi_a)
    std::array<std::array<double, 6>, 6> c{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double wq = rule.weights[q] * geo.area;
      const auto phi = p2_values(rule.points[q]);
      const auto dphi = p2_gradients(rule.points[q], geo);
      Vec2 wv;
      for (int a = 0; a < 6; ++a) {
        wv.x += phi[a] * w[FeSpace::dof(en[a], 0)];
        wv.y += phi[a] * w[FeSpace::dof(en[a], 1)];
      }
      for (int b = 0; b < 6; ++b) {
        const double adv = wq * (wv.x * dphi[b].x + wv.y * dphi[b].y);
        for (int a = 0; a < 6; ++a) c[a][b] += adv * phi[a];
      }
    }
    Local12 local{};
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        const double v = scale * 0.5 * (c[a][b] - c[b][a]);
        local[2 * a][2 * b] = v;
        local[2 * a + 1][2 * b + 1] = v;
      }
    const auto dofs = vector_dofs(en);
    scatter(target, dofs, dofs, local);
  }
}

CsrMatrix assemble_convection(const FeSpace& s, std::span<const double> w) {
  CsrMatrix n = s.vector_pattern();
  add_convection(s, w, 1.0, n);
  return n;
}

std::vector<double> assemble_load(const FeSpace& s, const VectorField& f) {
  std::vector<double> b(static_cast<std::size_t>(s.num_vector()), 0.0);
  const auto& rule = triangle_degree5();
  for (std::size_t t = 0; t < s.num_elements(); ++t) {
    const auto geo = s.geometry(t);
    const auto& en = s.element_nodes(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double wq = rule.weights[q] * geo.area;
      const auto x = geo.map(rule.points[q]);
      const Vec2 fv = f(x.x, x.y);
      const auto phi = p2_values(rule.points[q]);
      for (int a = 0; a < 6; ++a) {
        b[FeSpace::dof(en[a], 0)] += wq * fv.x * phi[a];
        b[FeSpace::dof(en[a], 1)] += wq * fv.y * phi[a];
      }
    }
  }
  return b;
}

CsrMatrix assemble_p1_mass(const FeSpace& s) {
  CsrMatrix m = s.p1_pattern();
  const auto& rule = triangle_degree5();
  for (std::size_t t = 0; t < s.num_elements(); ++t) {
    const auto geo = s.geometry(t);
    std::array<std::array<double, 3>, 3> local{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule.points[q];
      const double wq = rule.weights[q] * geo.area;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) local[i][j] += wq * l[i] * l[j];
    }
    const auto& tri = s.mesh().triangles[t];
    scatter(m, tri, tri, local);
  }
  return m;
}

CsrMatrix assemble_p1_divergence(const FeSpace& s) {
  CsrMatrix b = s.p1_vector_pattern();
  const auto& rule = triangle_degree5();
  for (std::size_t t = 0; t < s.num_elements(); ++t) {
    const auto geo = s.geometry(t);
    std::array<std::array<double, 12>, 3> local{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& l = rule.points[q];
      const double wq = rule.weights[q] * geo.area;
      const auto dphi = p2_gradients(l, geo);
      for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 6; ++a) {
          local[i][2 * a] += wq * l[i] * dphi[a].x;
          local[i][2 * a + 1] += wq * l[i] * dphi[a].y;
        }
    }
    scatter(b, s.mesh().triangles[t], vector_dofs(s.element_nodes(t)), local);
  }
  return b;
}

void apply_dirichlet_in_place(CsrMatrix& a, std::vector<double>& b, const DirichletData& bc) {
  if (a.rows() != a.cols() || b.size() != static_cast<std::size_t>(a.rows()))
    throw linalg::DimensionError("apply_dirichlet dimension mismatch");
  if (bc.dofs.size() != bc.values.size()) throw linalg::DimensionError("Dirichlet data length mismatch");
  if (bc.dofs.empty()) return;
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<char> fixed(n, 0);
  std::vector<double> g(n, 0.0);
  for (std::size_t k = 0; k < bc.dofs.size(); ++k) {
    fixed[bc.dofs[k]] = 1;
    g[bc.dofs[k]] = bc.values[k];
  }
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  auto vals = a.values();
  for (std::size_t i = 0; i < n; ++i) {
    for (Index p = offsets[i]; p < offsets[i + 1]; ++p) {
      const auto j = static_cast<std::size_t>(cols[p]);
      if (fixed[i]) {
        vals[p] = (i == j) ? 1.0 : 0.0;
      } else if (fixed[j]) {
        b[i] -= vals[p] * g[j];
        vals[p] = 0.0;
      }
    }
    if (fixed[i]) {
      if (a.find(static_cast<Index>(i), static_cast<Index>(i)) < 0)
        throw linalg::DimensionError("constrained row has no diagonal entry in the pattern");
      b[i] = g[i];
    }
  }
}

std::pair<CsrMatrix, std::vector<double>> apply_dirichlet(CsrMatrix a, std::vector<double> b,
                                                          const DirichletData& bc) {
  apply_dirichlet_in_place(a, b, bc);
  return {std::move(a), std::move(b)};
}

double energy_norm(const CsrMatrix& a, std::span<const double> v) {
  const auto av = a * v;
  return std::sqrt(std::max(0.0, linalg::dot(v, av)));
}

namespace {

// Sums of squares at quadrature points: no cancellation for nearly zero fields.
template <class Integrand>
double integrate_squares(const FeSpace& s, Integrand f) {
  const auto& rule = triangle_degree5();
  double sum = 0.0;
  for (std::size_t t = 0; t < s.num_elements(); ++t) {
    const double area = s.geometry(t).area;
    for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * area * f(t, rule.points[q]);
  }
  return std::sqrt(sum);
}

}  // namespace

double l2_norm(const FeSpace& s, std::span<const double> v) {
  return integrate_squares(s, [&](std::size_t t, const std::array<double, 3>& l) {
    const Vec2 u = evaluate(s, v, t, l);
    return u.x * u.x + u.y * u.y;
  });
}

double h1_seminorm(const FeSpace& s, std::span<const double> v) {
  return integrate_squares(s, [&](std::size_t t, const std::array<double, 3>& l) {
    const Grad2 g = evaluate_gradient(s, v, t, l);
    return g.dx.x * g.dx.x + g.dx.y * g.dx.y + g.dy.x * g.dy.x + g.dy.y * g.dy.y;
  });
}

double divergence_l2(const FeSpace& s, std::span<const double> v) {
  return integrate_squares(s, [&](std::size_t t, const std::array<double, 3>& l) {
    const Grad2 g = evaluate_gradient(s, v, t, l);
    const double d = g.dx.x + g.dy.y;
    return d * d;
  });
}

double l2_error(const FeSpace& s, std::span<const double> v, const VectorField& exact) {
  const auto& rule = triangle_degree5();
  double sum = 0.0;
  for (std::size_t t = 0; t < s.num_elements(); ++t) {
    const auto geo = s.geometry(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto x = geo.map(rule.points[q]);
      const Vec2 uh = evaluate(s, v, t, rule.points[q]);
      const Vec2 ue = exact(x.x, x.y);
      sum += rule.weights[q] * geo.area * ((uh.x - ue.x) * (uh.x - ue.x) + (uh.y - ue.y) * (uh.y - ue.y));
    }
  }
  return std::sqrt(sum);
}

double h1_error(const FeSpace& s, std::span<const double> v,
                const std::function<Grad2(double, double)>& exact_gradient) {
  const auto& rule = triangle_degree5();
  double sum = 0.0;
  for (std::size_t t = 0; t < s.num_elements(); ++t) {
    const auto geo = s.geometry(t);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto x = geo.map(rule.points[q]);
      const Grad2 gh = evaluate_gradient(s, v, t, rule.points[q]);
      const Grad2 ge = exact_gradient(x.x, x.y);
      const double e[4] = {gh.dx.x - ge.dx.x, gh.dx.y - ge.dx.y, gh.dy.x - ge.dy.x, gh.dy.y - ge.dy.y};
      sum += rule.weights[q] * geo.area * (e[0] * e[0] + e[1] * e[1] + e[2] * e[2] + e[3] * e[3]);
    }
  }
  return std::sqrt(sum);
}

double p1_l2_error(const FeSpace& s, std::span<const double> q, const ScalarField& exact) {
  const auto& rule = triangle_degree5();
  double sum = 0.0;
  for (std::size_t t = 0; t < s.num_elements(); ++t) {
    const auto geo = s.geometry(t);
    const auto& tri = s.mesh().triangles[t];
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const auto& l = rule.points[k];
      const auto x = geo.map(l);
      const double qh = l[0] * q[tri[0]] + l[1] * q[tri[1]] + l[2] * q[tri[2]];
      const double d = qh - exact(x.x, x.y);
      sum += rule.weights[k] * geo.area * d * d;
    }
  }
  return std::sqrt(sum);
}

PressureProjector::PressureProjector(const FeSpace& s)
    : mass_(assemble_p1_mass(s)),
      lu_(std::make_unique<linalg::SparseLu>(mass_)),
      area_(s.mesh().total_area()) {}

PressureProjector::~PressureProjector() = default;
PressureProjector::PressureProjector(PressureProjector&&) noexcept = default;
PressureProjector& PressureProjector::operator=(PressureProjector&&) noexcept = default;

double PressureProjector::mean(std::span<const double> q) const {
  const auto mq = mass_ * q;
  double integral = 0.0;
  for (double v : mq) integral += v;
  return integral / area_;
}

double PressureProjector::l2_norm(std::span<const double> q) const { return energy_norm(mass_, q); }

PressureField PressureProjector::project(std::span<const double> acc) const {
  if (acc.size() != static_cast<std::size_t>(mass_.rows()))
    throw linalg::DimensionError("pressure accumulator has the wrong length");
  std::vector<double> rhs(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) rhs[i] = -acc[i];
  PressureField p{lu_->solve(rhs)};
  const double m = mean(p.values);
  for (double& v : p.values) v -= m;
  return p;
}

PressureField pressure_project(const FeSpace& s, std::span<const double> acc) {
  return PressureProjector(s).project(acc);
}

}  // namespace aaipp::fem
