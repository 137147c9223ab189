#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "aaipp/linalg.hpp"
#include "oracles.hpp"

using namespace aaipp;
using linalg::DenseLsProblem;

namespace {

DenseLsProblem make(const std::vector<std::vector<double>>& cols, const std::vector<double>& rhs,
                    const linalg::CsrMatrix* w = nullptr) {
  DenseLsProblem p;
  for (const auto& c : cols) p.columns.emplace_back(c);
  p.rhs = rhs;
  p.gram_weight = w;
  return p;
}

linalg::CsrMatrix random_spd(Index n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd b = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return u(rng); });
  const Eigen::MatrixXd w = b * b.transpose() + n * Eigen::MatrixXd::Identity(n, n);
  std::vector<linalg::Triplet> t;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) t.push_back({i, j, w(i, j)});
  return linalg::CsrMatrix::from_triplets(n, n, t);
}

double wdot(const linalg::CsrMatrix* w, std::span<const double> a, std::span<const double> b) {
  return linalg::InnerProduct{w}.dot(a, b);
}

}  // namespace

TEST(DenseLeastSquares, SingleColumnExactFit) {
  const std::vector<std::vector<double>> cols{{1.0, 0.0}};
  const std::vector<double> rhs{1.0, 0.0};
  const auto r = linalg::dense_least_squares(make(cols, rhs));
  ASSERT_EQ(r.coefficients.size(), 1u);
  EXPECT_DOUBLE_EQ(r.coefficients[0], 1.0);
  EXPECT_EQ(r.kept_columns, (std::vector<std::size_t>{0}));
  EXPECT_NEAR(r.residual_norm, 0.0, 1e-15);
}

TEST(DenseLeastSquares, ParallelColumnIsDropped) {
  const std::vector<std::vector<double>> cols{{1.0, 0.0}, {1e-16, 0.0}};
  const std::vector<double> rhs{0.0, 1.0};
  const auto r = linalg::dense_least_squares(make(cols, rhs));
  EXPECT_EQ(r.kept_columns, (std::vector<std::size_t>{0}));
  EXPECT_EQ(r.coefficients[1], 0.0);
  EXPECT_NEAR(r.coefficients[0], 0.0, 1e-15);
  EXPECT_NEAR(r.residual_norm, 1.0, 1e-15);
}

TEST(DenseLeastSquares, TwoByTwoHandSolution) {
  // normal equations: [[2,0],[0,2]] g = [2,2] -> g = (1,1)
  const std::vector<std::vector<double>> cols{{1.0, 1.0}, {1.0, -1.0}};
  const std::vector<double> rhs{2.0, 0.0};
  const auto r = linalg::dense_least_squares(make(cols, rhs));
  EXPECT_NEAR(r.coefficients[0], 1.0, 1e-15);
  EXPECT_NEAR(r.coefficients[1], 1.0, 1e-15);
  EXPECT_NEAR(r.residual_norm, 0.0, 1e-15);
}

TEST(DenseLeastSquares, ZeroRhsGivesZeroCoefficients) {
  const std::vector<std::vector<double>> cols{{1.0, 2.0}, {3.0, 1.0}};
  const std::vector<double> rhs{0.0, 0.0};
  const auto r = linalg::dense_least_squares(make(cols, rhs));
  EXPECT_EQ(r.coefficients, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(r.residual_norm, 0.0);
}

TEST(DenseLeastSquares, RejectsBadInput) {
  const std::vector<double> rhs{1.0, 0.0};
  EXPECT_THROW(linalg::dense_least_squares(make({}, rhs)), std::exception);
  const std::vector<std::vector<double>> short_col{{1.0}};
  EXPECT_THROW(linalg::dense_least_squares(make(short_col, rhs)), std::exception);
  const std::vector<std::vector<double>> cols{{1.0, 0.0}};
  EXPECT_THROW(linalg::dense_least_squares(make(cols, rhs), 0.0), std::exception);
  EXPECT_THROW(linalg::dense_least_squares(make(cols, rhs), 1.0), std::exception);
}

TEST(DenseLeastSquares, ResidualOrthogonalToKeptColumnsInWeightedProduct) {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 12;
    const auto w = random_spd(n, rng);
    std::vector<std::vector<double>> cols;
    for (int c = 0; c < 5; ++c) cols.push_back(oracle::random_vector(n, rng));
    const auto rhs = oracle::random_vector(n, rng);
    const auto r = linalg::dense_least_squares(make(cols, rhs, &w));
    std::vector<double> res = rhs;
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (Index i = 0; i < n; ++i) res[i] -= r.coefficients[c] * cols[c][i];
    const double rn = std::sqrt(wdot(&w, res, res));
    EXPECT_NEAR(rn, r.residual_norm, 1e-12);
    for (std::size_t c : r.kept_columns) {
      const double fn = std::sqrt(wdot(&w, cols[c], cols[c]));
      EXPECT_LE(std::abs(wdot(&w, res, cols[c])), 1e-10 * rn * fn);
    }
  }
}

TEST(DenseLeastSquares, DroppingNeverBeatsUnregularizedSolveAndNeverExceedsRhs) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 8;
    std::vector<std::vector<double>> cols;
    for (int c = 0; c < 4; ++c) cols.push_back(oracle::random_vector(n, rng));
    // a nearly dependent column so that dropping actually happens in some trials
    std::vector<double> near = cols[0];
    const double tiny = (trial % 2) ? 1e-10 : 1e-3;
    for (auto& v : near) v += tiny * u(rng);
    cols.push_back(near);
    const auto rhs = oracle::random_vector(n, rng);
    const auto r = linalg::dense_least_squares(make(cols, rhs));

    Eigen::MatrixXd f(n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (Index i = 0; i < n; ++i) f(i, c) = cols[c][i];
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n);
    const Eigen::VectorXd g = f.completeOrthogonalDecomposition().solve(b);
    const double best = (b - f * g).norm();
    EXPECT_GE(r.residual_norm, best - 1e-10);
    EXPECT_LE(r.residual_norm, b.norm() + 1e-14);
  }
}

TEST(DenseLeastSquares, AllColumnsDependentExceptFirst) {
  const std::vector<std::vector<double>> cols{{1.0, 1.0, 0.0}, {2.0, 2.0, 0.0}, {-1.0, -1.0, 0.0}};
  const std::vector<double> rhs{1.0, 3.0, 2.0};
  const auto r = linalg::dense_least_squares(make(cols, rhs));
  EXPECT_EQ(r.kept_columns, (std::vector<std::size_t>{0}));
  EXPECT_NEAR(r.coefficients[0], 2.0, 1e-14);
  EXPECT_NEAR(r.residual_norm, std::sqrt(2.0 + 4.0), 1e-14);
}
