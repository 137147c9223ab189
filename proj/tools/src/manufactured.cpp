#include "aaipp/cli/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace aaipp::cli {

using fem::Grad2;
using fem::Vec2;

ManufacturedSolution smooth_flow() {
  constexpr double pi = std::numbers::pi;
  ManufacturedSolution m;
  m.name = "smooth";
  m.velocity = [](double x, double y, double) {
    return Vec2{-std::cos(pi * x) * std::sin(pi * y), std::sin(pi * x) * std::cos(pi * y)};
  };
  m.gradient = [](double x, double y, double) {
    const double sxy = std::sin(pi * x) * std::sin(pi * y), cxy = std::cos(pi * x) * std::cos(pi * y);
    Grad2 g;
    g.dx = {pi * sxy, pi * cxy};
    g.dy = {-pi * cxy, -pi * sxy};
    return g;
  };
  m.pressure = [](double x, double y, double) { return std::sin(pi * x) * std::sin(pi * y) - 4.0 / (pi * pi); };
  m.forcing = [u = m.velocity, grad = m.gradient](double x, double y, double t, double nu) {
    const Vec2 v = u(x, y, t);
    const Grad2 g = grad(x, y, t);
    const Vec2 conv{v.x * g.dx.x + v.y * g.dy.x, v.x * g.dx.y + v.y * g.dy.y};
    const Vec2 gp{pi * std::cos(pi * x) * std::sin(pi * y), pi * std::sin(pi * x) * std::cos(pi * y)};
    // the velocity is an eigenfunction of the Laplacian: lap u = -2 pi^2 u
    return Vec2{conv.x + gp.x + 2 * pi * pi * nu * v.x, conv.y + gp.y + 2 * pi * pi * nu * v.y};
  };
  return m;
}

namespace {

Vec2 quad_field(double x, double y) { return {x * x - 2 * x * y + y * y, y * y - 2 * x * y}; }

Grad2 quad_gradient(double x, double y) {
  Grad2 g;
  g.dx = {2 * x - 2 * y, -2 * y};
  g.dy = {-2 * x + 2 * y, 2 * y - 2 * x};
  return g;
}

Vec2 quad_convection(double x, double y) {
  const Vec2 v = quad_field(x, y);
  const Grad2 g = quad_gradient(x, y);
  return {v.x * g.dx.x + v.y * g.dy.x, v.x * g.dx.y + v.y * g.dy.y};
}

constexpr Vec2 kQuadLaplacian{4.0, 2.0};

}  // namespace

ManufacturedSolution quadratic_flow() {
  ManufacturedSolution m;
  m.name = "polynomial";
  m.velocity = [](double x, double y, double) { return quad_field(x, y); };
  m.gradient = [](double x, double y, double) { return quad_gradient(x, y); };
  m.pressure = [](double x, double, double) { return x - 0.5; };
  m.forcing = [](double x, double y, double, double nu) {
    const Vec2 c = quad_convection(x, y);
    return Vec2{c.x + 1.0 - nu * kQuadLaplacian.x, c.y - nu * kQuadLaplacian.y};
  };
  return m;
}

ManufacturedSolution transient_quadratic_flow() {
  ManufacturedSolution m;
  m.name = "transient-polynomial";
  const auto g = [](double t) { return 1.0 + t * t * t; };
  const auto dg = [](double t) { return 3.0 * t * t; };
  m.velocity = [g](double x, double y, double t) {
    const Vec2 v = quad_field(x, y);
    return Vec2{g(t) * v.x, g(t) * v.y};
  };
  m.gradient = [g](double x, double y, double t) {
    Grad2 gr = quad_gradient(x, y);
    const double s = g(t);
    gr.dx = {s * gr.dx.x, s * gr.dx.y};
    gr.dy = {s * gr.dy.x, s * gr.dy.y};
    return gr;
  };
  m.pressure = [](double, double, double) { return 0.0; };
  m.forcing = [g, dg](double x, double y, double t, double nu) {
    const Vec2 v = quad_field(x, y);
    const Vec2 c = quad_convection(x, y);
    const double s = g(t), ds = dg(t);
    return Vec2{ds * v.x + s * s * c.x - nu * s * kQuadLaplacian.x,
                ds * v.y + s * s * c.y - nu * s * kQuadLaplacian.y};
  };
  return m;
}

}  // namespace aaipp::cli
