#include <cmath>

#include "aaipp/linalg.hpp"

namespace aaipp::linalg {

LeastSquaresResult dense_least_squares(const DenseLsProblem& problem, double drop_tol) {
  if (problem.columns.empty()) throw std::invalid_argument("least squares needs at least one column");
  if (!(drop_tol > 0.0 && drop_tol < 1.0)) throw std::invalid_argument("drop_tol must lie in (0, 1)");
  const std::size_t n = problem.rhs.size();
  for (const auto& c : problem.columns)
    if (c.size() != n) throw DimensionError("least-squares columns and rhs differ in length");
  if (problem.gram_weight != nullptr &&
      (static_cast<std::size_t>(problem.gram_weight->rows()) != n ||
       static_cast<std::size_t>(problem.gram_weight->cols()) != n))
    throw DimensionError("gram weight does not match the column length");

  const InnerProduct ip{problem.gram_weight, n};
  const std::size_t ncols = problem.columns.size();
  LeastSquaresResult out;
  out.coefficients.assign(ncols, 0.0);

  bool zero_rhs = true;
  for (double v : problem.rhs)
    if (v != 0.0) { zero_rhs = false; break; }
  if (zero_rhs) return out;

  // Q holds W-orthonormal directions, wq the same directions premultiplied by W
  // so that every projection is a plain dot product.
  std::vector<std::vector<double>> q, wq;
  std::vector<std::vector<double>> r;  // r[k][i]: coefficient of kept column k in direction i
  std::vector<double> v(n), wv(n);

  for (std::size_t c = 0; c < ncols; ++c) {
    const auto col = problem.columns[c];
    v.assign(col.begin(), col.end());
    ip.apply(v, wv);
    const double own_norm = std::sqrt(std::max(0.0, dot(v, wv)));
    if (own_norm == 0.0) continue;

    std::vector<double> rk(q.size() + 1, 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double h = dot(wq[i], v);
      rk[i] = h;
      for (std::size_t j = 0; j < n; ++j) v[j] -= h * q[i][j];
    }
    ip.apply(v, wv);
    const double rem = std::sqrt(std::max(0.0, dot(v, wv)));
    // Direction sine of this column against the span of the ones already kept.
    if (rem < drop_tol * own_norm) continue;

    rk.back() = rem;
    for (std::size_t j = 0; j < n; ++j) {
      v[j] /= rem;
      wv[j] /= rem;
    }
    q.push_back(v);
    wq.push_back(wv);
    r.push_back(std::move(rk));
    out.kept_columns.push_back(c);
  }

  const std::size_t kept = q.size();
  if (kept > 0) {
    std::vector<double> y(kept);
    std::vector<double> res(problem.rhs.begin(), problem.rhs.end());
    for (std::size_t i = 0; i < kept; ++i) {
      y[i] = dot(wq[i], res);
      for (std::size_t j = 0; j < n; ++j) res[j] -= y[i] * q[i][j];
    }
    // Back substitution on the upper-triangular R (column k of R is r[k]).
    std::vector<double> gamma(kept);
    for (std::size_t kk = kept; kk-- > 0;) {
      double s = y[kk];
      for (std::size_t l = kk + 1; l < kept; ++l) s -= r[l][kk] * gamma[l];
      gamma[kk] = s / r[kk][kk];
    }
    for (std::size_t k = 0; k < kept; ++k) out.coefficients[out.kept_columns[k]] = gamma[k];
  }

  std::vector<double> res(problem.rhs.begin(), problem.rhs.end());
  for (std::size_t c = 0; c < ncols; ++c) {
    const double g = out.coefficients[c];
    if (g == 0.0) continue;
    const auto col = problem.columns[c];
    for (std::size_t j = 0; j < n; ++j) res[j] -= g * col[j];
  }
  out.residual_norm = ip.norm(res);
  return out;
}

}  // namespace aaipp::linalg
