#pragma once

#include <functional>
#include <string>

#include "aaipp/fe_space.hpp"

namespace aaipp::cli {

/// Steady or time-dependent manufactured Navier-Stokes solution with the
/// forcing that makes it exact: f = u_t + (u . grad) u + grad p - nu lap u.
struct ManufacturedSolution {
  std::string name;
  std::function<fem::Vec2(double, double, double)> velocity;
  std::function<fem::Grad2(double, double, double)> gradient;
  std::function<double(double, double, double)> pressure;
  std::function<fem::Vec2(double, double, double, double)> forcing;  // (x, y, t, nu)
};

/// u = (-cos(pi x) sin(pi y), sin(pi x) cos(pi y)), p = sin(pi x) sin(pi y) - 4/pi^2.
/// Nonzero boundary data.
ManufacturedSolution smooth_flow();

/// u = (x^2 - 2xy + y^2, y^2 - 2xy), p = x - 1/2; divergence-free and in P2.
ManufacturedSolution quadratic_flow();

/// u = (1 + t^3) (x^2 - 2xy + y^2, y^2 - 2xy), p = 0: exact in space, cubic in time.
ManufacturedSolution transient_quadratic_flow();

}  // namespace aaipp::cli
