#include "aaipp/quadrature.hpp"

#include <cmath>

namespace aaipp::fem {

const QuadratureRule& triangle_degree5() {
  static const QuadratureRule rule = [] {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
    const double w0 = 9.0 / 40.0;
    const double w1 = (155.0 - s15) / 1200.0;
    const double w2 = (155.0 + s15) / 1200.0;
    QuadratureRule r;
    r.degree = 5;
    r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                {a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1},
                {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2}};
    r.weights = {w0, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

}  // namespace aaipp::fem
