#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aaipp {

/// Index type shared by all sparse structures (matches the 32-bit UMFPACK interface).
using Index = int;

namespace linalg {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a direct factorization hits a zero pivot.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing in
/// every row; explicitly stored zeros are kept so that operators assembled on
/// the same finite element pattern can be combined value-wise.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
            std::vector<Index> col_indices, std::vector<double> values);

  /// Duplicate (row, col) entries are summed.
  static CsrMatrix from_triplets(Index nrows, Index ncols,
                                 std::span<const Triplet> entries);
  static CsrMatrix identity(Index n);

  Index rows() const { return nrows_; }
  Index cols() const { return ncols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const Index> row_offsets() const { return row_offsets_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Position of (row, col) in values(), or -1 when not stored.
  std::ptrdiff_t find(Index row, Index col) const;
  double coeff(Index row, Index col) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

  CsrMatrix transpose() const;
  bool same_pattern(const CsrMatrix& other) const;

  /// this += alpha * other. Fast path when the patterns agree; otherwise the
  /// union pattern is formed.
  CsrMatrix& add_scaled(double alpha, const CsrMatrix& other);
  CsrMatrix& scale(double alpha);

  /// Copy with the same pattern and all values set to zero.
  CsrMatrix zeros_like() const;

  std::vector<double> to_dense() const;

 private:
  void check_invariants() const;

  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// Sparse LU factorization P_r A P_c = L U with partial (threshold) pivoting
/// and an approximate-minimum-degree column ordering. Backed by UMFPACK; the
/// symbolic analysis is retained so that matrices with an unchanged pattern
/// can be refactored cheaply.
class SparseLu {
 public:
  explicit SparseLu(const CsrMatrix& a);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;
  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;

  /// Numeric refactorization. The pattern must match the analyzed matrix.
  void refactor(const CsrMatrix& a);

  std::vector<double> solve(std::span<const double> b) const;
  Index dimension() const;

  struct Factors {
    std::vector<Index> row_perm;  // row i of P_r A is row row_perm[i] of A
    std::vector<Index> col_perm;  // column j of A P_c is column col_perm[j] of A
    CsrMatrix lower;              // unit lower triangular
    CsrMatrix upper;
  };
  Factors factors() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Weighted inner product on the leading `measured` entries of a vector;
/// trailing entries are ignored. An empty weight means the Euclidean product.
struct InnerProduct {
  const CsrMatrix* weight = nullptr;
  std::size_t measured = static_cast<std::size_t>(-1);

  std::size_t extent(std::size_t length) const {
    return measured < length ? measured : length;
  }
  /// out = W a on the measured block.
  void apply(std::span<const double> a, std::span<double> out) const;
  double dot(std::span<const double> a, std::span<const double> b) const;
  double norm(std::span<const double> a) const;
};

struct DenseLsProblem {
  /// Columns of the difference matrix, most recent first. All columns and rhs
  /// share one length.
  std::vector<std::span<const double>> columns;
  std::span<const double> rhs;
  /// SPD operator defining the inner product; Euclidean when null.
  const CsrMatrix* gram_weight = nullptr;
};

struct LeastSquaresResult {
  std::vector<double> coefficients;       // one per input column; 0 when dropped
  std::vector<std::size_t> kept_columns;  // ascending
  double residual_norm = 0.0;
};

/// min_gamma || rhs - F gamma || in the weighted norm, via modified
/// Gram-Schmidt processed most-recent column first. A column whose orthogonal
/// remainder is below drop_tol times its own norm is discarded.
LeastSquaresResult dense_least_squares(const DenseLsProblem& problem,
                                       double drop_tol = 1e-8);

}  // namespace linalg
}  // namespace aaipp
