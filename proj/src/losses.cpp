#include "farsa/losses.hpp"

#include <cmath>
#include <cstring>
#include <memory>
#include <utility>

#include "farsa/kernels.hpp"

namespace farsa {

namespace {

constexpr int kParallelRowCutoff = 4096;

// log(1 + exp(-t)) without overflow for any t.
inline double log1p_exp_neg(double t) {
  return t > 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
}

// sigma(t) = 1 / (1 + exp(-t)), evaluated from the side that cannot overflow.
inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

QuadraticLoss::QuadraticLoss(std::vector<double> a, DenseVector b)
    : n_(static_cast<int>(b.size())), a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_)) {
    throw InvalidArgument("QuadraticLoss: A must be n x n");
  }
}

double QuadraticLoss::value(const DenseVector& x) const {
  double acc = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double* row = a_.data() + static_cast<std::size_t>(i) * n_;
    double ax = 0.0;
    for (int j = 0; j < n_; ++j) ax += row[j] * x[j];
    acc += x[i] * (0.5 * ax - b_[i]);
  }
  return acc;
}

DenseVector QuadraticLoss::gradient(const DenseVector& x) const {
  DenseVector g(n_);
  for (int i = 0; i < n_; ++i) {
    const double* row = a_.data() + static_cast<std::size_t>(i) * n_;
    double ax = 0.0;
    for (int j = 0; j < n_; ++j) ax += row[j] * x[j];
    g[i] = ax - b_[i];
  }
  return g;
}

ReducedHvp QuadraticLoss::reduced_hessian(const DenseVector& /*x*/,
                                          const std::vector<int>& coords) const {
  std::vector<int> idx = coords;
  const std::vector<double>* a = &a_;
  int n = n_;
  return [idx, a, n](const DenseVector& v, DenseVector& out) {
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const double* row = a->data() + static_cast<std::size_t>(idx[r]) * n;
      double acc = 0.0;
      for (std::size_t c = 0; c < idx.size(); ++c) acc += row[idx[c]] * v[c];
      out[r] = acc;
    }
  };
}

LogisticLoss::LogisticLoss(CsrMatrix data, std::vector<double> labels, double delta,
                           bool parallel)
    : data_(std::move(data)), labels_(std::move(labels)), delta_(delta), parallel_(parallel) {
  if (labels_.size() != static_cast<std::size_t>(data_.rows)) {
    throw InvalidArgument("LogisticLoss: one label per sample required");
  }
  for (double y : labels_) {
    if (y != 1.0 && y != -1.0) throw InvalidArgument("LogisticLoss: labels must be +-1");
  }
  if (data_.cols < data_.rows) {
    csc_ = transpose_to_csc(data_);
    has_csc_ = true;
  }
}

void LogisticLoss::compute_margins(const DenseVector& x, DenseVector& margins) const {
  margins.resize(data_.rows);
  csr_matvec(data_, x.data(), margins.data(), parallel_);
  for (int i = 0; i < data_.rows; ++i) margins[i] *= labels_[i];
}

double LogisticLoss::value(const DenseVector& x) const {
  DenseVector margins;
  compute_margins(x, margins);
  const int rows = data_.rows;
  double acc = 0.0;
#ifdef _OPENMP
  if (parallel_ && rows >= kParallelRowCutoff) {
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (int i = 0; i < rows; ++i) acc += log1p_exp_neg(margins[i]);
    return acc / rows;
  }
#endif
  for (int i = 0; i < rows; ++i) acc += log1p_exp_neg(margins[i]);
  return acc / rows;
}

DenseVector LogisticLoss::gradient(const DenseVector& x) const {
  DenseVector margins;
  compute_margins(x, margins);
  const int rows = data_.rows;
  // coef_i = -y_i (1 - sigma_i) / N, with 1 - sigma(t) = sigma(-t) so the
  // saturated tail loses no precision to cancellation.
  DenseVector coef(rows);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel_ && rows >= kParallelRowCutoff)
#endif
  for (int i = 0; i < rows; ++i) {
    coef[i] = -labels_[i] * sigmoid(-margins[i]) / rows;
  }
  DenseVector g(data_.cols);
  csr_matvec_t(data_, has_csc_ ? &csc_ : nullptr, coef.data(), g.data(), parallel_);
  return g;
}

ReducedHvp LogisticLoss::reduced_hessian(const DenseVector& x,
                                         const std::vector<int>& coords) const {
  const int rows = data_.rows;
  // Clamped curvature diagonal, folded together with the 1/N scaling:
  // w_i = max{sigma_i (1 - sigma_i), delta} / N.
  auto weights = std::make_shared<DenseVector>(rows);
  {
    DenseVector margins;
    compute_margins(x, margins);
    for (int i = 0; i < rows; ++i) {
      double s = sigmoid(margins[i]);
      (*weights)[i] = std::max(s * (1.0 - s), delta_) / rows;
    }
  }
  auto idx = std::make_shared<std::vector<int>>(coords);
  auto scratch_full = std::make_shared<DenseVector>(data_.cols, 0.0);
  auto scratch_rows = std::make_shared<DenseVector>(rows);
  const CsrMatrix* d = &data_;
  const CscMatrix* dt = has_csc_ ? &csc_ : nullptr;
  bool parallel = parallel_;
  // out = [D' W D]_{I,I} v: pad v to full width, one row pass for u = D v,
  // scale by the curvature weights, then gather D'u on the kept columns.
  return [d, dt, weights, idx, scratch_full, scratch_rows, parallel](const DenseVector& v,
                                                                     DenseVector& out) {
    DenseVector& vf = *scratch_full;
    DenseVector& u = *scratch_rows;
    for (std::size_t r = 0; r < idx->size(); ++r) vf[(*idx)[r]] = v[r];
    csr_matvec(*d, vf.data(), u.data(), parallel);
    for (std::size_t r = 0; r < idx->size(); ++r) vf[(*idx)[r]] = 0.0;
    for (int i = 0; i < d->rows; ++i) u[i] *= (*weights)[i];
    if (dt != nullptr) {
      // per-column dots over the kept columns only
      for (std::size_t r = 0; r < idx->size(); ++r) {
        int j = (*idx)[r];
        double acc = 0.0;
        for (std::size_t k = dt->col_ptr[j]; k < dt->col_ptr[j + 1]; ++k) {
          acc += dt->vals[k] * u[dt->row_idx[k]];
        }
        out[r] = acc;
      }
    } else {
      DenseVector z(d->cols);
      csr_matvec_t_serial(*d, u.data(), z.data());
      for (std::size_t r = 0; r < idx->size(); ++r) out[r] = z[(*idx)[r]];
    }
  };
}

std::optional<double> LogisticLoss::lipschitz_bound() const {
  return frobenius_norm_sq(data_) / (4.0 * data_.rows);
}

}  // namespace farsa
