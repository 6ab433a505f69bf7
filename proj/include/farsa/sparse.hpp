#ifndef FARSA_SPARSE_HPP_
#define FARSA_SPARSE_HPP_

#include <cstddef>
#include <vector>

// Hand-rolled CSR/CSC storage for the sample matrix D (N rows = samples,
// n cols = features) plus the matvec kernels the losses are built from.
// Every kernel has a plain serial reference implementation and an
// OpenMP-parallel variant; the *_auto dispatchers pick the parallel path when
// it is compiled in and the problem is large enough to pay for it.

namespace farsa {

struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::size_t> row_ptr;  // rows + 1 offsets
  std::vector<int> col_idx;
  std::vector<double> vals;

  std::size_t nnz() const { return vals.size(); }
};

struct CscMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::size_t> col_ptr;  // cols + 1 offsets
  std::vector<int> row_idx;
  std::vector<double> vals;
};

CscMatrix transpose_to_csc(const CsrMatrix& a);

double frobenius_norm_sq(const CsrMatrix& a);

// out[i] = sum_j a(i,j) x[j], out sized a.rows
void csr_matvec_serial(const CsrMatrix& a, const double* x, double* out);
void csr_matvec_omp(const CsrMatrix& a, const double* x, double* out);

// out[j] = sum_i a(i,j) w[i], out sized a.cols (transposed row accumulation)
void csr_matvec_t_serial(const CsrMatrix& a, const double* w, double* out);
// same product through a precomputed column copy, parallel over columns
void csc_matvec_t_serial(const CscMatrix& at, const double* w, double* out);
void csc_matvec_t_omp(const CscMatrix& at, const double* w, double* out);

// Dispatchers: `parallel` requests the OpenMP path (falls back to serial when
// OpenMP is not compiled in or the matrix is tiny).
void csr_matvec(const CsrMatrix& a, const double* x, double* out, bool parallel);
void csr_matvec_t(const CsrMatrix& a, const CscMatrix* at, const double* w, double* out,
                  bool parallel);

}  // namespace farsa

#endif  // FARSA_SPARSE_HPP_
