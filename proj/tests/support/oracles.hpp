#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls the library's basis functions or quadrature rule.

#include <array>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aaipp/fe_space.hpp"

namespace oracle {

using aaipp::fem::FeSpace;
using aaipp::fem::Grad2;
using aaipp::fem::Vec2;

/// Collapsed-square Gauss-Legendre product rule on the reference triangle.
/// Weights are fractions of the triangle area (they sum to 1). With n points
/// per direction the rule integrates polynomials up to degree 2n - 2 exactly.
struct TriangleRule {
  std::vector<std::array<double, 3>> lambda;
  std::vector<double> weights;
};
TriangleRule conical_rule(int n = 7);

/// Integral of x^a y^b over the reference triangle (0,0), (1,0), (0,1).
double reference_monomial(int a, int b);

/// P2 shape functions on element t written out from barycentric coordinates.
struct LocalBasis {
  std::array<double, 6> value;
  std::array<Vec2, 6> grad;
  double area;
  Vec2 point;
};
LocalBasis local_basis(const FeSpace& s, std::size_t t, const std::array<double, 3>& lambda);

Vec2 field_value(const FeSpace& s, std::span<const double> u, std::size_t t, const LocalBasis& b);
Grad2 field_gradient(const FeSpace& s, std::span<const double> u, std::size_t t, const LocalBasis& b);

/// Sum over elements and rule points of w * area * fn(t, basis).
double integrate(const FeSpace& s, const std::function<double(std::size_t, const LocalBasis&)>& fn, int n = 7);

double integral_grad_squared(const FeSpace& s, std::span<const double> u);
double integral_div_squared(const FeSpace& s, std::span<const double> u);
double integral_l2_squared(const FeSpace& s, std::span<const double> u);
/// 1/2 (w . grad u, v) - 1/2 (w . grad v, u)
double skew_trilinear(const FeSpace& s, std::span<const double> w, std::span<const double> u,
                      std::span<const double> v);
std::vector<double> load_vector(const FeSpace& s, const aaipp::fem::VectorField& f);

std::vector<double> random_vector(std::size_t n, std::mt19937& rng, double lo = -1.0, double hi = 1.0);

/// Coupled penalty iteration with discontinuous P1 pressure, assembled and
/// solved densely:
///   nu (grad u+, grad v) + b*(u, u+, v) - (p+, div v) = (f, v)
///   eps (p+, q) + (div u+, q) = eps (p, q)
/// starting from u0 = Dirichlet lift, p0 = 0.
struct CoupledOracle {
  CoupledOracle(const FeSpace& s, double nu, double eps, std::vector<double> load,
                aaipp::fem::DirichletData bc);

  void step();

  const FeSpace& space;
  double nu, eps;
  std::vector<double> load;
  aaipp::fem::DirichletData bc;
  Eigen::MatrixXd stiffness;   // vector P2
  Eigen::MatrixXd divergence;  // rows: P1disc (3 per element), cols: vector P2
  Eigen::MatrixXd pmass;       // P1disc mass
  std::vector<double> u;
  Eigen::VectorXd p;
  int k = 0;

  Eigen::MatrixXd convection(std::span<const double> w) const;
  /// L2 norm of a P1disc field.
  double pressure_norm(const Eigen::VectorXd& q) const;
  /// L2 projection of a P1disc field onto continuous P1, mean removed.
  std::vector<double> continuous_projection(const Eigen::VectorXd& q) const;
};

}  // namespace oracle
