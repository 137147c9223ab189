#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "aaipp/assembly.hpp"
#include "aaipp/linalg.hpp"
#include "aaipp/mesh.hpp"

using namespace aaipp;
using linalg::CsrMatrix;
using linalg::Triplet;

namespace {

void expect_invariants(const CsrMatrix& a) {
  const auto ro = a.row_offsets();
  const auto ci = a.col_indices();
  ASSERT_EQ(ro.size(), static_cast<std::size_t>(a.rows() + 1));
  EXPECT_EQ(ro.front(), 0);
  EXPECT_EQ(static_cast<std::size_t>(ro.back()), a.values().size());
  EXPECT_EQ(ci.size(), a.values().size());
  for (Index r = 0; r < a.rows(); ++r) {
    EXPECT_LE(ro[r], ro[r + 1]);
    for (Index k = ro[r]; k < ro[r + 1]; ++k) {
      EXPECT_LT(ci[k], a.cols());
      if (k > ro[r]) { EXPECT_LT(ci[k - 1], ci[k]); }
    }
  }
}

CsrMatrix random_sparse(Index n, double density, std::mt19937& rng, bool spd_plus_skew) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (keep(rng)) {
        const double a = u(rng), b = u(rng);
        if (spd_plus_skew) {
          t.push_back({i, j, a + b});
          t.push_back({j, i, a - b});
        } else {
          t.push_back({i, j, a});
          t.push_back({j, i, b});
        }
      }
  // diagonal dominance keeps the symmetric part positive definite
  std::vector<double> rowsum(n, 0.0);
  for (const auto& e : t) rowsum[e.row] += std::abs(e.value);
  for (Index i = 0; i < n; ++i) t.push_back({i, i, rowsum[i] + 1.0 + std::abs(u(rng))});
  return CsrMatrix::from_triplets(n, n, t);
}

}  // namespace

TEST(CsrMatrix, DuplicateTripletsAreSummed) {
  const std::vector<Triplet> t{{0, 0, 1.0}, {0, 0, 2.0}};
  const auto a = CsrMatrix::from_triplets(1, 1, t);
  EXPECT_EQ(a.nnz(), 1u);
  EXPECT_DOUBLE_EQ(a.coeff(0, 0), 3.0);
  expect_invariants(a);
}

TEST(CsrMatrix, EmptyTripletListGivesEmptyStructure) {
  const auto a = CsrMatrix::from_triplets(2, 2, std::vector<Triplet>{});
  EXPECT_EQ(a.nnz(), 0u);
  EXPECT_EQ(std::vector<Index>(a.row_offsets().begin(), a.row_offsets().end()), (std::vector<Index>{0, 0, 0}));
  const std::vector<double> x{1.0, 2.0};
  EXPECT_EQ(a * x, (std::vector<double>{0.0, 0.0}));
}

TEST(CsrMatrix, IdentityTripletsActAsIdentity) {
  const std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}};
  const auto a = CsrMatrix::from_triplets(3, 3, t);
  const std::vector<double> x{1.0, 2.0, 3.0};
  EXPECT_EQ(linalg::spmv(a, x), x);
  EXPECT_EQ(CsrMatrix::identity(3) * x, x);
}

TEST(CsrMatrix, OutOfRangeTripletThrows) {
  const std::vector<Triplet> t{{2, 0, 1.0}};
  EXPECT_THROW(CsrMatrix::from_triplets(2, 2, t), std::exception);
  const std::vector<Triplet> neg{{0, -1, 1.0}};
  EXPECT_THROW(CsrMatrix::from_triplets(2, 2, neg), std::exception);
}

TEST(CsrMatrix, ConstructorRejectsUnsortedColumns) {
  EXPECT_THROW(CsrMatrix(1, 3, {0, 2}, {2, 1}, {1.0, 1.0}), std::exception);
  EXPECT_THROW(CsrMatrix(1, 3, {0, 2}, {1, 1}, {1.0, 1.0}), std::exception);
  EXPECT_THROW(CsrMatrix(1, 2, {0, 1}, {2}, {1.0}), std::exception);
}

TEST(CsrMatrix, SpmvDimensionMismatchThrows) {
  const auto a = CsrMatrix::identity(3);
  const std::vector<double> x{1.0, 2.0};
  EXPECT_THROW(linalg::spmv(a, x), linalg::DimensionError);
}

TEST(CsrMatrix, SpmvMatchesDenseProduct) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(0.2);
  std::vector<Triplet> t;
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(20, 20);
  for (Index i = 0; i < 20; ++i)
    for (Index j = 0; j < 20; ++j)
      if (keep(rng)) {
        const double v = u(rng);
        t.push_back({i, j, v});
        dense(i, j) += v;
      }
  const auto a = CsrMatrix::from_triplets(20, 20, t);
  expect_invariants(a);
  Eigen::VectorXd x(20);
  std::vector<double> xs(20);
  for (int i = 0; i < 20; ++i) xs[i] = x(i) = u(rng);
  const Eigen::VectorXd ref = dense * x;
  const auto y = a * xs;
  double err = 0.0;
  for (int i = 0; i < 20; ++i) err += (y[i] - ref(i)) * (y[i] - ref(i));
  EXPECT_LE(std::sqrt(err), 1e-14 * ref.norm());
}

TEST(CsrMatrix, ZeroMatrixTimesVectorIsZero) {
  const auto a = CsrMatrix::from_triplets(3, 3, std::vector<Triplet>{{0, 1, 0.0}});
  const std::vector<double> x{1.0, -2.0, 3.0};
  EXPECT_EQ(a * x, (std::vector<double>(3, 0.0)));
}

TEST(CsrMatrix, TransposeAndAddScaled) {
  std::mt19937 rng(5);
  const auto a = random_sparse(15, 0.3, rng, false);
  const auto at = a.transpose();
  for (Index i = 0; i < 15; ++i)
    for (Index j = 0; j < 15; ++j) EXPECT_EQ(a.coeff(i, j), at.coeff(j, i));

  auto sum = a;
  sum.add_scaled(2.0, at);  // different pattern: union path
  for (Index i = 0; i < 15; ++i)
    for (Index j = 0; j < 15; ++j) EXPECT_DOUBLE_EQ(sum.coeff(i, j), a.coeff(i, j) + 2.0 * a.coeff(j, i));
  expect_invariants(sum);

  auto same = a;
  same.add_scaled(-1.0, a);
  EXPECT_TRUE(same.same_pattern(a));
  for (double v : same.values()) EXPECT_EQ(v, 0.0);
}

TEST(SparseLu, DiagonalSolve) {
  const std::vector<Triplet> t{{0, 0, 2.0}, {1, 1, 4.0}};
  const linalg::SparseLu lu(CsrMatrix::from_triplets(2, 2, t));
  const std::vector<double> b{2.0, 4.0};
  const auto x = lu.solve(b);
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], 1.0);
}

TEST(SparseLu, ZeroRowIsReportedSingular) {
  const std::vector<Triplet> t{{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 0.0}, {1, 1, 0.0}};
  EXPECT_THROW(linalg::SparseLu(CsrMatrix::from_triplets(2, 2, t)), linalg::SingularMatrixError);
  const std::vector<Triplet> structural{{0, 0, 1.0}, {0, 1, 2.0}};
  EXPECT_THROW(linalg::SparseLu(CsrMatrix::from_triplets(2, 2, structural)), linalg::SingularMatrixError);
}

TEST(SparseLu, NonSquareThrows) {
  const std::vector<Triplet> t{{0, 0, 1.0}};
  EXPECT_THROW(linalg::SparseLu(CsrMatrix::from_triplets(1, 2, t)), linalg::DimensionError);
}

TEST(SparseLu, StiffnessPlusMassOnCoarsestMesh) {
  const auto s = fem::build_space(mesh::structured_unit_square(1));
  auto a = fem::assemble_stiffness(s);
  a.add_scaled(1.0, fem::assemble_mass(s));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(a.rows());
  for (auto& v : x) v = u(rng);
  const linalg::SparseLu lu(a);
  const auto y = lu.solve(a * x);
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) err += (y[i] - x[i]) * (y[i] - x[i]);
  EXPECT_LE(std::sqrt(err) / linalg::norm2(x), 1e-10);
}

TEST(SparseLu, RandomSpdPlusSkewResidual) {
  std::mt19937 rng(2024);
  for (Index n : {5, 20, 60, 120, 200}) {
    const auto a = random_sparse(n, 0.05, rng, true);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> b(n);
    for (auto& v : b) v = u(rng);
    const linalg::SparseLu lu(a);
    const auto x = lu.solve(b);
    const auto ax = a * x;
    double r = 0.0;
    for (Index i = 0; i < n; ++i) r += (ax[i] - b[i]) * (ax[i] - b[i]);
    EXPECT_LE(std::sqrt(r) / linalg::norm2(b), 1e-10) << "n=" << n;
  }
}

TEST(SparseLu, FactorsReconstructPermutedMatrix) {
  std::mt19937 rng(77);
  for (Index n : {4, 9, 25}) {
    const auto a = random_sparse(n, 0.3, rng, false);
    const linalg::SparseLu lu(a);
    const auto f = lu.factors();
    ASSERT_EQ(static_cast<Index>(f.row_perm.size()), n);
    EXPECT_EQ(std::set<Index>(f.row_perm.begin(), f.row_perm.end()).size(), static_cast<std::size_t>(n));
    EXPECT_EQ(std::set<Index>(f.col_perm.begin(), f.col_perm.end()).size(), static_cast<std::size_t>(n));
    const auto dl = f.lower.to_dense();
    const auto du = f.upper.to_dense();
    const auto da = a.to_dense();
    for (Index i = 0; i < n; ++i) {
      EXPECT_EQ(dl[i * n + i], 1.0);
      EXPECT_NE(du[i * n + i], 0.0);
      for (Index j = 0; j < n; ++j) {
        if (j > i) { EXPECT_EQ(dl[i * n + j], 0.0); }
        if (j < i) { EXPECT_EQ(du[i * n + j], 0.0); }
        double lu_ij = 0.0;
        for (Index k = 0; k < n; ++k) lu_ij += dl[i * n + k] * du[k * n + j];
        EXPECT_NEAR(lu_ij, da[f.row_perm[i] * n + f.col_perm[j]], 1e-12) << i << "," << j;
      }
    }
  }
}

TEST(SparseLu, RefactorReusesPatternAndRejectsOthers) {
  std::mt19937 rng(8);
  const auto a = random_sparse(30, 0.1, rng, true);
  linalg::SparseLu lu(a);
  auto a2 = a;
  a2.scale(3.0);
  lu.refactor(a2);
  std::vector<double> b(30, 1.0);
  const auto x = lu.solve(b);
  const auto ax = a2 * x;
  for (int i = 0; i < 30; ++i) EXPECT_NEAR(ax[i], 1.0, 1e-12);
  EXPECT_THROW(lu.refactor(CsrMatrix::identity(30)), std::exception);
}

TEST(InnerProduct, WeightedAndTruncated) {
  const std::vector<Triplet> t{{0, 0, 2.0}, {1, 1, 3.0}};
  const auto w = CsrMatrix::from_triplets(2, 2, t);
  const linalg::InnerProduct ip{&w, 2};
  const std::vector<double> a{1.0, 1.0, 100.0}, b{2.0, -1.0, 7.0};
  EXPECT_DOUBLE_EQ(ip.dot(a, b), 2.0 * 2.0 - 3.0);
  EXPECT_DOUBLE_EQ(ip.norm(a), std::sqrt(5.0));
  const linalg::InnerProduct euclid{};
  EXPECT_DOUBLE_EQ(euclid.dot(a, b), 2.0 - 1.0 + 700.0);
}
