#ifndef FARSA_LOSSES_HPP_
#define FARSA_LOSSES_HPP_

#include <functional>
#include <optional>
#include <vector>

#include "farsa/sparse.hpp"
#include "farsa/types.hpp"

namespace farsa {

// Operator v |-> [H]_{coords,coords} v acting on reduced vectors (same length
// as coords). State that depends only on the expansion point is precomputed
// when the operator is built.
using ReducedHvp = std::function<void(const DenseVector&, DenseVector&)>;

class SmoothLoss {
 public:
  virtual ~SmoothLoss() = default;

  virtual int dim() const = 0;
  virtual double value(const DenseVector& x) const = 0;
  virtual DenseVector gradient(const DenseVector& x) const = 0;

  // Reduced Hessian(-model) operator of the smooth part at x.
  virtual ReducedHvp reduced_hessian(const DenseVector& x,
                                     const std::vector<int>& coords) const = 0;

  // Upper bound on the gradient Lipschitz constant, when one is cheap.
  virtual std::optional<double> lipschitz_bound() const { return std::nullopt; }
};

// f(x) = 1/2 x'Ax - b'x with dense symmetric positive definite A (row-major).
// Small-n test and experiment workhorse; its reduced Hessian is exact.
class QuadraticLoss : public SmoothLoss {
 public:
  QuadraticLoss(std::vector<double> a, DenseVector b);

  int dim() const override { return n_; }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  ReducedHvp reduced_hessian(const DenseVector& x,
                             const std::vector<int>& coords) const override;
  std::optional<double> lipschitz_bound() const override { return lipschitz_; }

  // Sets the bound reported by lipschitz_bound (e.g. a known largest eigenvalue).
  void set_lipschitz_bound(double value) { lipschitz_ = value; }

 private:
  int n_;
  std::vector<double> a_;  // n x n row-major
  DenseVector b_;
  std::optional<double> lipschitz_;
};

// f(x) = 1/N sum_i log(1 + exp(-y_i d_i'x)) over N samples d_i (rows of D)
// with labels y_i in {-1,+1}. The Hessian model replaces the sigmoid curvature
// sigma_i(1-sigma_i) by max{sigma_i(1-sigma_i), delta} so the reduced system
// stays positive definite even at saturated samples.
class LogisticLoss : public SmoothLoss {
 public:
  // Builds a precomputed column copy of the data when cols < rows (column
  // access is then cheaper than a transposed row sweep).
  LogisticLoss(CsrMatrix data, std::vector<double> labels, double delta = 1e-8,
               bool parallel = true);

  int dim() const override { return data_.cols; }
  double value(const DenseVector& x) const override;
  DenseVector gradient(const DenseVector& x) const override;
  ReducedHvp reduced_hessian(const DenseVector& x,
                             const std::vector<int>& coords) const override;
  // ||D||_F^2 / (4N): the sigmoid curvature never exceeds 1/4.
  std::optional<double> lipschitz_bound() const override;

  int num_samples() const { return data_.rows; }
  const CsrMatrix& data() const { return data_; }

 private:
  // margins[i] = y_i d_i'x
  void compute_margins(const DenseVector& x, DenseVector& margins) const;

  CsrMatrix data_;
  std::vector<double> labels_;
  CscMatrix csc_;
  bool has_csc_ = false;
  double delta_;
  bool parallel_;
};

}  // namespace farsa

#endif  // FARSA_LOSSES_HPP_
