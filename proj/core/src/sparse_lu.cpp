#include <umfpack.h>

#include <string>

#include "aaipp/linalg.hpp"

namespace aaipp::linalg {

namespace {

struct SymbolicDeleter {
  void operator()(void* p) const { umfpack_di_free_symbolic(&p); }
};
struct NumericDeleter {
  void operator()(void* p) const { umfpack_di_free_numeric(&p); }
};

std::string status_message(int status) {
  switch (status) {
    case UMFPACK_ERROR_out_of_memory: return "out of memory";
    case UMFPACK_ERROR_invalid_matrix: return "invalid matrix";
    case UMFPACK_ERROR_different_pattern: return "pattern differs from the analyzed matrix";
    default: return "UMFPACK status " + std::to_string(status);
  }
}

}  // namespace

struct SparseLu::Impl {
  Index n = 0;
  // Column-compressed copy of A; UMFPACK reads it during iterative refinement.
  std::vector<Index> ap, ai;
  std::vector<double> ax;
  std::unique_ptr<void, SymbolicDeleter> symbolic;
  std::unique_ptr<void, NumericDeleter> numeric;
  double control[UMFPACK_CONTROL];

  void load(const CsrMatrix& a) {
    CsrMatrix at = a.transpose();  // CSR of A^T is CSC of A
    ap.assign(at.row_offsets().begin(), at.row_offsets().end());
    ai.assign(at.col_indices().begin(), at.col_indices().end());
    ax.assign(at.values().begin(), at.values().end());
  }

  void factor_numeric() {
    numeric.reset();
    void* handle = nullptr;
    double info[UMFPACK_INFO];
    int status = umfpack_di_numeric(ap.data(), ai.data(), ax.data(), symbolic.get(), &handle,
                                    control, info);
    numeric.reset(handle);
    if (status == UMFPACK_WARNING_singular_matrix)
      throw SingularMatrixError("sparse LU: matrix is singular (zero pivot encountered)");
    if (status != UMFPACK_OK)
      throw std::runtime_error("sparse LU numeric factorization failed: " + status_message(status));
  }
};

SparseLu::SparseLu(const CsrMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw DimensionError("sparse LU requires a square matrix");
  impl_->n = a.rows();
  umfpack_di_defaults(impl_->control);
  // Unscaled so that the exposed factors satisfy P_r A P_c = L U exactly.
  impl_->control[UMFPACK_SCALE] = UMFPACK_SCALE_NONE;
  impl_->load(a);
  if (impl_->n == 0) return;

  void* handle = nullptr;
  double info[UMFPACK_INFO];
  int status = umfpack_di_symbolic(impl_->n, impl_->n, impl_->ap.data(), impl_->ai.data(),
                                   impl_->ax.data(), &handle, impl_->control, info);
  impl_->symbolic.reset(handle);
  if (status == UMFPACK_WARNING_singular_matrix)
    throw SingularMatrixError("sparse LU: matrix is structurally singular");
  if (status != UMFPACK_OK)
    throw std::runtime_error("sparse LU symbolic analysis failed: " + status_message(status));
  impl_->factor_numeric();
}

SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

void SparseLu::refactor(const CsrMatrix& a) {
  if (a.rows() != impl_->n || a.cols() != impl_->n) throw DimensionError("refactor dimension mismatch");
  std::vector<Index> old_ap = impl_->ap, old_ai = impl_->ai;
  impl_->load(a);
  if (impl_->ap != old_ap || impl_->ai != old_ai)
    throw DimensionError("refactor requires the pattern of the analyzed matrix");
  if (impl_->n == 0) return;
  impl_->factor_numeric();
}

Index SparseLu::dimension() const { return impl_->n; }

std::vector<double> SparseLu::solve(std::span<const double> b) const {
  if (b.size() != static_cast<std::size_t>(impl_->n)) throw DimensionError("solve dimension mismatch");
  std::vector<double> x(b.size());
  if (impl_->n == 0) return x;
  double info[UMFPACK_INFO];
  int status = umfpack_di_solve(UMFPACK_A, impl_->ap.data(), impl_->ai.data(), impl_->ax.data(),
                                x.data(), b.data(), impl_->numeric.get(), impl_->control, info);
  if (status == UMFPACK_WARNING_singular_matrix)
    throw SingularMatrixError("sparse LU solve: matrix is singular");
  if (status != UMFPACK_OK) throw std::runtime_error("sparse LU solve failed: " + status_message(status));
  return x;
}

SparseLu::Factors SparseLu::factors() const {
  const Index n = impl_->n;
  Factors f;
  if (n == 0) {
    f.lower = CsrMatrix(0, 0, {0}, {}, {});
    f.upper = CsrMatrix(0, 0, {0}, {}, {});
    return f;
  }
  int lnz = 0, unz = 0, nrow = 0, ncol = 0, nz_udiag = 0;
  umfpack_di_get_lunz(&lnz, &unz, &nrow, &ncol, &nz_udiag, impl_->numeric.get());

  std::vector<Index> lp(n + 1), lj(lnz), up(n + 1), ui(unz), p(n), q(n);
  std::vector<double> lx(lnz), ux(unz);
  int do_recip = 0;
  int status = umfpack_di_get_numeric(lp.data(), lj.data(), lx.data(), up.data(), ui.data(),
                                      ux.data(), p.data(), q.data(), nullptr, &do_recip, nullptr,
                                      impl_->numeric.get());
  if (status != UMFPACK_OK) throw std::runtime_error("cannot extract LU factors: " + status_message(status));

  // L comes back row-compressed, U column-compressed.
  std::vector<Triplet> lower, upper;
  lower.reserve(lnz);
  upper.reserve(unz);
  for (Index i = 0; i < n; ++i)
    for (Index k = lp[i]; k < lp[i + 1]; ++k) lower.push_back({i, lj[k], lx[k]});
  for (Index j = 0; j < n; ++j)
    for (Index k = up[j]; k < up[j + 1]; ++k) upper.push_back({ui[k], j, ux[k]});
  f.lower = CsrMatrix::from_triplets(n, n, lower);
  f.upper = CsrMatrix::from_triplets(n, n, upper);
  f.row_perm = std::move(p);
  f.col_perm = std::move(q);
  return f;
}

}  // namespace aaipp::linalg
