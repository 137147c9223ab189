#pragma once

#include <deque>
#include <span>
#include <vector>

#include "aaipp/linalg.hpp"

namespace aaipp::anderson {

/// Depth value selecting the full history (m_k = k - 1).
inline constexpr int kFullDepth = -1;

struct AndersonConfig {
  int depth = 0;                      ///< m >= 0, or kFullDepth
  std::vector<double> damping{1.0};   ///< beta_k schedule; the last entry repeats
  double drop_tol = 1e-8;             ///< direction-sine threshold for history columns
  double alpha_zero_tol = 1e-12;      ///< |alpha_oldest| below this reduces the depth

  double beta(int k) const;
  void validate() const;
};

struct StepReport {
  int k = 0;
  double theta = 1.0;          ///< optimized residual norm / ||w_k||
  std::vector<double> alphas;  ///< affine weights, newest pair first; sums to 1
  int effective_depth = 0;
  int dropped_columns = 0;     ///< history columns rejected by the direction-sine test
  double residual_norm = 0.0;  ///< ||w_k|| in the optimization norm
};

/// Windowed Anderson acceleration of x <- g(x). The caller evaluates g at
/// current() and hands the value to step(). The optimization is solved in the
/// difference form min ||w_k - F gamma|| and mapped to affine weights; the
/// update is the beta-damped affine combination of stored iterates and
/// g-values, applied to the whole vector even when the inner product only
/// measures a leading block.
class AndersonAccelerator {
 public:
  AndersonAccelerator(std::vector<double> x0, AndersonConfig cfg, linalg::InnerProduct ip = {});

  /// Consumes g(current()) and advances to the next iterate.
  const std::vector<double>& step(std::span<const double> g_val);

  const std::vector<double>& current() const { return current_; }
  int iteration() const { return k_; }
  const StepReport& last_report() const { return report_; }
  std::size_t history_size() const { return history_.size(); }
  const AndersonConfig& config() const { return cfg_; }

 private:
  struct Pair {
    std::vector<double> x;  // x_{j-1}
    std::vector<double> g;  // g(x_{j-1})
  };

  AndersonConfig cfg_;
  linalg::InnerProduct ip_;
  std::vector<double> current_;
  std::deque<Pair> history_;  // newest first
  int k_ = 0;
  StepReport report_;
};

inline AndersonAccelerator aa_initialize(std::vector<double> x0, AndersonConfig cfg,
                                         linalg::InnerProduct ip = {}) {
  return AndersonAccelerator(std::move(x0), std::move(cfg), ip);
}

}  // namespace aaipp::anderson
