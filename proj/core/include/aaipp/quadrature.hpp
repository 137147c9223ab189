#pragma once

#include <array>
#include <vector>

namespace aaipp::fem {

/// Rule on the reference triangle in barycentric coordinates. Weights sum to
/// one and are scaled by the element area at the point of use.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Symmetric 7-point rule, exact for polynomials of total degree 5.
const QuadratureRule& triangle_degree5();

}  // namespace aaipp::fem
