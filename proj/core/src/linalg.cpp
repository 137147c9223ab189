#include "aaipp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aaipp::linalg {

CsrMatrix::CsrMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
                     std::vector<Index> col_indices, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  check_invariants();
}

void CsrMatrix::check_invariants() const {
  if (nrows_ < 0 || ncols_ < 0) throw DimensionError("negative matrix dimension");
  if (row_offsets_.size() != static_cast<std::size_t>(nrows_) + 1 || row_offsets_.front() != 0)
    throw DimensionError("row_offsets must have nrows+1 entries starting at 0");
  if (static_cast<std::size_t>(row_offsets_.back()) != values_.size() ||
      col_indices_.size() != values_.size())
    throw DimensionError("row_offsets[nrows] must equal the number of stored entries");
  for (Index i = 0; i < nrows_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i]) throw DimensionError("row_offsets must be nondecreasing");
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      if (col_indices_[p] < 0 || col_indices_[p] >= ncols_)
        throw DimensionError("column index out of range");
      if (p > row_offsets_[i] && col_indices_[p] <= col_indices_[p - 1])
        throw DimensionError("column indices must be strictly increasing within a row");
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(Index nrows, Index ncols, std::span<const Triplet> entries) {
  if (nrows < 0 || ncols < 0) throw DimensionError("negative matrix dimension");
  std::vector<Index> counts(static_cast<std::size_t>(nrows) + 1, 0);
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw DimensionError("triplet index (" + std::to_string(t.row) + ", " +
                           std::to_string(t.col) + ") out of range");
    ++counts[t.row + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());

  // Bucket by row, then sort and merge each row.
  std::vector<std::pair<Index, double>> bucket(entries.size());
  std::vector<Index> fill(counts.begin(), counts.end() - 1);
  for (const auto& t : entries) bucket[fill[t.row]++] = {t.col, t.value};

  std::vector<Index> offsets(static_cast<std::size_t>(nrows) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());
  for (Index i = 0; i < nrows; ++i) {
    auto first = bucket.begin() + counts[i];
    auto last = bucket.begin() + counts[i + 1];
    std::sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!cols.empty() && static_cast<Index>(cols.size()) > offsets[i] && cols.back() == it->first) {
        vals.back() += it->second;
      } else {
        cols.push_back(it->first);
        vals.push_back(it->second);
      }
    }
    offsets[i + 1] = static_cast<Index>(cols.size());
  }
  return CsrMatrix(nrows, ncols, std::move(offsets), std::move(cols), std::move(vals));
}

CsrMatrix CsrMatrix::identity(Index n) {
  std::vector<Index> offsets(static_cast<std::size_t>(n) + 1);
  std::iota(offsets.begin(), offsets.end(), 0);
  std::vector<Index> cols(static_cast<std::size_t>(n));
  std::iota(cols.begin(), cols.end(), 0);
  return CsrMatrix(n, n, std::move(offsets), std::move(cols),
                   std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

std::ptrdiff_t CsrMatrix::find(Index row, Index col) const {
  if (row < 0 || row >= nrows_) return -1;
  auto first = col_indices_.begin() + row_offsets_[row];
  auto last = col_indices_.begin() + row_offsets_[row + 1];
  auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return -1;
  return it - col_indices_.begin();
}

double CsrMatrix::coeff(Index row, Index col) const {
  auto p = find(row, col);
  return p < 0 ? 0.0 : values_[p];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(ncols_) || y.size() != static_cast<std::size_t>(nrows_))
    throw DimensionError("spmv dimension mismatch");
  for (Index i = 0; i < nrows_; ++i) {
    double s = 0.0;
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) s += values_[p] * x[col_indices_[p]];
    y[i] = s;
  }
}

std::vector<double> CsrMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(nrows_));
  multiply(x, y);
  return y;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Index> offsets(static_cast<std::size_t>(ncols_) + 1, 0);
  for (Index c : col_indices_) ++offsets[c + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<Index> fill(offsets.begin(), offsets.end() - 1);
  std::vector<Index> cols(values_.size());
  std::vector<double> vals(values_.size());
  for (Index i = 0; i < nrows_; ++i) {
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      Index q = fill[col_indices_[p]]++;
      cols[q] = i;
      vals[q] = values_[p];
    }
  }
  return CsrMatrix(ncols_, nrows_, std::move(offsets), std::move(cols), std::move(vals));
}

bool CsrMatrix::same_pattern(const CsrMatrix& other) const {
  return nrows_ == other.nrows_ && ncols_ == other.ncols_ &&
         row_offsets_ == other.row_offsets_ && col_indices_ == other.col_indices_;
}

CsrMatrix& CsrMatrix::add_scaled(double alpha, const CsrMatrix& other) {
  if (nrows_ != other.nrows_ || ncols_ != other.ncols_) throw DimensionError("add_scaled dimension mismatch");
  if (same_pattern(other)) {
    for (std::size_t p = 0; p < values_.size(); ++p) values_[p] += alpha * other.values_[p];
    return *this;
  }
  std::vector<Triplet> entries;
  entries.reserve(nnz() + other.nnz());
  for (Index i = 0; i < nrows_; ++i) {
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      entries.push_back({i, col_indices_[p], values_[p]});
    for (Index p = other.row_offsets_[i]; p < other.row_offsets_[i + 1]; ++p)
      entries.push_back({i, other.col_indices_[p], alpha * other.values_[p]});
  }
  *this = from_triplets(nrows_, ncols_, entries);
  return *this;
}

CsrMatrix& CsrMatrix::scale(double alpha) {
  for (double& v : values_) v *= alpha;
  return *this;
}

CsrMatrix CsrMatrix::zeros_like() const {
  CsrMatrix z = *this;
  std::fill(z.values_.begin(), z.values_.end(), 0.0);
  return z;
}

std::vector<double> CsrMatrix::to_dense() const {
  std::vector<double> dense(static_cast<std::size_t>(nrows_) * ncols_, 0.0);
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      dense[static_cast<std::size_t>(i) * ncols_ + col_indices_[p]] = values_[p];
  return dense;
}

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x) { return a * x; }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void InnerProduct::apply(std::span<const double> a, std::span<double> out) const {
  const std::size_t n = extent(a.size());
  if (weight == nullptr) {
    std::copy_n(a.begin(), n, out.begin());
    return;
  }
  if (static_cast<std::size_t>(weight->rows()) != n)
    throw DimensionError("inner-product weight does not match the measured block");
  weight->multiply(a.first(n), out.first(n));
}

double InnerProduct::dot(std::span<const double> a, std::span<const double> b) const {
  const std::size_t n = extent(a.size());
  if (weight == nullptr) return linalg::dot(a.first(n), b.first(n));
  std::vector<double> wb(n);
  apply(b, wb);
  return linalg::dot(a.first(n), wb);
}

double InnerProduct::norm(std::span<const double> a) const {
  return std::sqrt(std::max(0.0, dot(a, a)));
}

}  // namespace aaipp::linalg
