#include "farsa/sparse.hpp"

#include <algorithm>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace farsa {

namespace {
// Below this many nonzeros the fork/join overhead dominates any speedup.
constexpr std::size_t kParallelNnzCutoff = 1 << 14;
}  // namespace

CscMatrix transpose_to_csc(const CsrMatrix& a) {
  CscMatrix t;
  t.rows = a.rows;
  t.cols = a.cols;
  t.col_ptr.assign(static_cast<std::size_t>(a.cols) + 1, 0);
  t.row_idx.resize(a.nnz());
  t.vals.resize(a.nnz());
  for (std::size_t k = 0; k < a.nnz(); ++k) ++t.col_ptr[a.col_idx[k] + 1];
  for (int j = 0; j < a.cols; ++j) t.col_ptr[j + 1] += t.col_ptr[j];
  std::vector<std::size_t> fill(t.col_ptr.begin(), t.col_ptr.end() - 1);
  for (int i = 0; i < a.rows; ++i) {
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      std::size_t slot = fill[a.col_idx[k]]++;
      t.row_idx[slot] = i;
      t.vals[slot] = a.vals[k];
    }
  }
  return t;
}

double frobenius_norm_sq(const CsrMatrix& a) {
  double acc = 0.0;
  for (double v : a.vals) acc += v * v;
  return acc;
}

void csr_matvec_serial(const CsrMatrix& a, const double* x, double* out) {
  for (int i = 0; i < a.rows; ++i) {
    double acc = 0.0;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      acc += a.vals[k] * x[a.col_idx[k]];
    }
    out[i] = acc;
  }
}

void csr_matvec_omp(const CsrMatrix& a, const double* x, double* out) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows; ++i) {
    double acc = 0.0;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      acc += a.vals[k] * x[a.col_idx[k]];
    }
    out[i] = acc;
  }
#else
  csr_matvec_serial(a, x, out);
#endif
}

void csr_matvec_t_serial(const CsrMatrix& a, const double* w, double* out) {
  std::memset(out, 0, sizeof(double) * static_cast<std::size_t>(a.cols));
  for (int i = 0; i < a.rows; ++i) {
    double wi = w[i];
    if (wi == 0.0) continue;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      out[a.col_idx[k]] += a.vals[k] * wi;
    }
  }
}

void csc_matvec_t_serial(const CscMatrix& at, const double* w, double* out) {
  for (int j = 0; j < at.cols; ++j) {
    double acc = 0.0;
    for (std::size_t k = at.col_ptr[j]; k < at.col_ptr[j + 1]; ++k) {
      acc += at.vals[k] * w[at.row_idx[k]];
    }
    out[j] = acc;
  }
}

void csc_matvec_t_omp(const CscMatrix& at, const double* w, double* out) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (int j = 0; j < at.cols; ++j) {
    double acc = 0.0;
    for (std::size_t k = at.col_ptr[j]; k < at.col_ptr[j + 1]; ++k) {
      acc += at.vals[k] * w[at.row_idx[k]];
    }
    out[j] = acc;
  }
#else
  csc_matvec_t_serial(at, w, out);
#endif
}

void csr_matvec(const CsrMatrix& a, const double* x, double* out, bool parallel) {
  if (parallel && a.nnz() >= kParallelNnzCutoff) {
    csr_matvec_omp(a, x, out);
  } else {
    csr_matvec_serial(a, x, out);
  }
}

void csr_matvec_t(const CsrMatrix& a, const CscMatrix* at, const double* w, double* out,
                  bool parallel) {
  if (at != nullptr) {
    if (parallel && at->vals.size() >= kParallelNnzCutoff) {
      csc_matvec_t_omp(*at, w, out);
    } else {
      csc_matvec_t_serial(*at, w, out);
    }
  } else {
    csr_matvec_t_serial(a, w, out);
  }
}

}  // namespace farsa
