// Times the serial reference kernels against the OpenMP variants on a
// synthetic logistic instance: matvec, transposed matvec, loss value,
// gradient and one reduced Hessian-vector product.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "farsa/losses.hpp"
#include "farsa/sparse.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using farsa::CscMatrix;
using farsa::CsrMatrix;
using farsa::DenseVector;
using farsa::LogisticLoss;

CsrMatrix random_csr(int rows, int cols, int nnz_per_row, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick_col(0, cols - 1);
  std::normal_distribution<double> val(0.0, 1.0);
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.push_back(0);
  std::vector<char> used(cols, 0);
  for (int i = 0; i < rows; ++i) {
    std::vector<int> cols_here;
    while (static_cast<int>(cols_here.size()) < nnz_per_row) {
      int c = pick_col(rng);
      if (!used[c]) {
        used[c] = 1;
        cols_here.push_back(c);
      }
    }
    std::sort(cols_here.begin(), cols_here.end());
    for (int c : cols_here) {
      used[c] = 0;
      m.col_idx.push_back(c);
      m.vals.push_back(val(rng));
    }
    m.row_ptr.push_back(m.col_idx.size());
  }
  return m;
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-22s %10.3f ms %10.3f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  int rows = 200000;
  int cols = 600;
  int nnz_per_row = 20;
  int reps = 5;
  if (argc > 1 && (std::string(argv[1]) == "-h" || std::string(argv[1]) == "--help")) {
    std::printf("usage: bench_losses [rows] [cols]\n");
    return 0;
  }
  try {
    if (argc > 1) rows = std::stoi(argv[1]);
    if (argc > 2) cols = std::stoi(argv[2]);
  } catch (const std::exception&) {
    std::fprintf(stderr, "usage: bench_losses [rows] [cols]\n");
    return 2;
  }
  if (rows < 1 || cols < nnz_per_row) {
    std::fprintf(stderr, "bench_losses: need rows >= 1 and cols >= %d\n", nnz_per_row);
    return 2;
  }

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not compiled in; both columns run the serial kernels\n");
#endif
  std::printf("samples %d, features %d, nnz/row %d, best of %d\n\n", rows, cols,
              nnz_per_row, reps);

  std::mt19937_64 rng(7);
  CsrMatrix d = random_csr(rows, cols, nnz_per_row, rng);
  CscMatrix dt = farsa::transpose_to_csc(d);

  std::normal_distribution<double> val(0.0, 1.0);
  DenseVector x(cols);
  for (double& v : x) v = 0.1 * val(rng);
  DenseVector w(rows);
  for (double& v : w) v = val(rng);
  std::vector<double> labels(rows);
  for (double& y : labels) y = val(rng) > 0 ? 1.0 : -1.0;

  DenseVector out_rows(rows), out_cols(cols);
  std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  report("csr_matvec",
         time_best_of(reps, [&] { farsa::csr_matvec_serial(d, x.data(), out_rows.data()); }),
         time_best_of(reps, [&] { farsa::csr_matvec_omp(d, x.data(), out_rows.data()); }));

  report("csr_matvec_t",
         time_best_of(reps, [&] { farsa::csr_matvec_t_serial(d, w.data(), out_cols.data()); }),
         time_best_of(reps, [&] { farsa::csc_matvec_t_omp(dt, w.data(), out_cols.data()); }));

  LogisticLoss serial_loss(d, labels, 1e-8, /*parallel=*/false);
  LogisticLoss parallel_loss(d, labels, 1e-8, /*parallel=*/true);

  double v = 0;
  report("logistic value",
         time_best_of(reps, [&] { v += serial_loss.value(x); }),
         time_best_of(reps, [&] { v += parallel_loss.value(x); }));

  report("logistic gradient",
         time_best_of(reps, [&] { out_cols = serial_loss.gradient(x); }),
         time_best_of(reps, [&] { out_cols = parallel_loss.gradient(x); }));

  std::vector<int> coords(cols / 2);
  std::iota(coords.begin(), coords.end(), 0);
  DenseVector vr(coords.size(), 1.0), hr(coords.size());
  auto hvp_serial = serial_loss.reduced_hessian(x, coords);
  auto hvp_parallel = parallel_loss.reduced_hessian(x, coords);
  report("logistic reduced hvp",
         time_best_of(reps, [&] { hvp_serial(vr, hr); }),
         time_best_of(reps, [&] { hvp_parallel(vr, hr); }));

  // keep the accumulator alive so the value loops are not optimized out
  std::printf("\n(checksum %g)\n", v + out_cols[0] + hr[0]);
  return 0;
}
