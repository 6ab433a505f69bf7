#ifndef FARSA_TYPES_HPP_
#define FARSA_TYPES_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace farsa {

using DenseVector = std::vector<double>;

// Thrown when an input violates an operation's contract (dimension mismatch,
// weight out of range, malformed partition, ...).
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a quantity that must be evaluated at a differentiable point is
// requested on a zero group block.
struct NotDifferentiable : std::domain_error {
  using std::domain_error::domain_error;
};

// Thrown by the CG solve when a curvature product p'Hp <= 0 exposes a
// non-positive-definite reduced Hessian model.
struct NonPositiveCurvature : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by the line searches when the backtracking cap is exceeded; the
// driver converts it into a linesearch_failure status.
struct LineSearchFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Disjoint cover of {0, ..., n-1} by contiguous-or-not index groups, each with
// a nonnegative weight (the per-group regularization strength lambda_i).
struct GroupPartition {
  std::vector<std::vector<int>> groups;
  std::vector<double> weights;
  int n = 0;

  int num_groups() const { return static_cast<int>(groups.size()); }

  // Validates the cover/disjointness/weight invariants; throws InvalidArgument.
  void validate() const;
};

// Flattens the coordinates of the selected groups, in group order.
std::vector<int> flatten_groups(const GroupPartition& partition,
                                const std::vector<int>& group_ids);

inline bool all_finite(const DenseVector& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace farsa

#endif  // FARSA_TYPES_HPP_
