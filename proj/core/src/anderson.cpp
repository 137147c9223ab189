#include "aaipp/anderson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aaipp::anderson {

double AndersonConfig::beta(int k) const {
  if (damping.empty()) return 1.0;
  const auto i = static_cast<std::size_t>(std::max(k - 1, 0));
  return damping[std::min(i, damping.size() - 1)];
}

void AndersonConfig::validate() const {
  if (depth < 0 && depth != kFullDepth) throw std::invalid_argument("Anderson depth must be >= 0 or full");
  for (double b : damping)
    if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("damping factors must lie in (0, 1]");
  if (!(drop_tol > 0.0 && drop_tol < 1.0)) throw std::invalid_argument("drop_tol must lie in (0, 1)");
  if (!(alpha_zero_tol >= 0.0)) throw std::invalid_argument("alpha_zero_tol must be nonnegative");
}

AndersonAccelerator::AndersonAccelerator(std::vector<double> x0, AndersonConfig cfg, linalg::InnerProduct ip)
    : cfg_(std::move(cfg)), ip_(ip), current_(std::move(x0)) {
  cfg_.validate();
}

const std::vector<double>& AndersonAccelerator::step(std::span<const double> g_val) {
  if (g_val.size() != current_.size()) throw linalg::DimensionError("g value has the wrong length");
  ++k_;
  const double beta = cfg_.beta(k_);

  history_.push_front({current_, std::vector<double>(g_val.begin(), g_val.end())});
  if (cfg_.depth != kFullDepth && history_.size() > static_cast<std::size_t>(cfg_.depth) + 1)
    history_.resize(static_cast<std::size_t>(cfg_.depth) + 1);

  const std::size_t len = current_.size();
  const std::size_t measured = ip_.extent(len);
  std::vector<std::vector<double>> w(history_.size(), std::vector<double>(measured));
  for (std::size_t i = 0; i < history_.size(); ++i)
    for (std::size_t j = 0; j < measured; ++j) w[i][j] = history_[i].g[j] - history_[i].x[j];

  report_ = StepReport{};
  report_.k = k_;
  report_.residual_norm = ip_.norm(w[0]);

  if (report_.residual_norm == 0.0) {
    // Fixed point reached: keep the iterate.
    report_.theta = 0.0;
    report_.alphas = {1.0};
    return current_;
  }

  const int mk = static_cast<int>(history_.size()) - 1;
  std::vector<double> gamma(static_cast<std::size_t>(mk), 0.0);
  int eff = mk;
  double minimized = report_.residual_norm;

  if (mk > 0) {
    // f_i = w_{k-i+1} - w_{k-i}, i = 1..mk (stored 0-based).
    std::vector<std::vector<double>> f(static_cast<std::size_t>(mk), std::vector<double>(measured));
    for (int i = 0; i < mk; ++i)
      for (std::size_t j = 0; j < measured; ++j) f[i][j] = w[i][j] - w[i + 1][j];

    bool first = true;
    while (eff > 0) {
      linalg::DenseLsProblem ls;
      ls.rhs = w[0];
      ls.gram_weight = ip_.weight;
      for (int i = 0; i < eff; ++i) ls.columns.emplace_back(f[i]);
      const auto sol = linalg::dense_least_squares(ls, cfg_.drop_tol);
      if (first) {
        report_.dropped_columns = eff - static_cast<int>(sol.kept_columns.size());
        first = false;
      }
      if (sol.kept_columns.empty()) {
        eff = 0;
        break;
      }
      // The oldest kept column carries the weight of the oldest pair in use.
      const auto oldest = sol.kept_columns.back();
      if (std::abs(sol.coefficients[oldest]) < cfg_.alpha_zero_tol) {
        eff = static_cast<int>(oldest);
        continue;
      }
      eff = static_cast<int>(oldest) + 1;
      std::fill(gamma.begin(), gamma.end(), 0.0);
      std::copy_n(sol.coefficients.begin(), eff, gamma.begin());
      minimized = sol.residual_norm;
      break;
    }
  }

  report_.effective_depth = eff;
  report_.theta = eff == 0 ? 1.0 : minimized / report_.residual_norm;
  report_.alphas.assign(static_cast<std::size_t>(eff) + 1, 0.0);
  for (int i = 0; i <= eff; ++i) {
    const double g_here = i == 0 ? 1.0 : gamma[i - 1];
    const double g_next = i < eff ? gamma[i] : 0.0;
    report_.alphas[i] = i == 0 ? 1.0 - g_next : g_here - g_next;
  }

  std::vector<double> next(len, 0.0);
  for (int i = 0; i <= eff; ++i) {
    const double a = report_.alphas[i];
    const auto& x = history_[i].x;
    const auto& g = history_[i].g;
    for (std::size_t j = 0; j < len; ++j) next[j] += a * ((1.0 - beta) * x[j] + beta * g[j]);
  }
  current_ = std::move(next);
  return current_;
}

}  // namespace aaipp::anderson
