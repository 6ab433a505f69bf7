#ifndef FARSA_CORE_HPP_
#define FARSA_CORE_HPP_

#include <vector>

#include "farsa/losses.hpp"
#include "farsa/types.hpp"

// Problem statement and the group-separable pieces every stage of the solver
// is built from: the regularizer r(x) = sum_i lambda_i ||[x]_{G_i}||_2, the
// proximal-gradient update T(x, alpha) and step s(x, alpha) = T - x.

namespace farsa {

struct CompositeObjective {
  const SmoothLoss* loss = nullptr;  // non-owning
  GroupPartition partition;

  int dim() const { return partition.n; }
};

// Everything about the current iterate that later stages reuse: the point,
// the PG parameter, and cached smooth values/gradient plus per-group norms.
struct IterateState {
  DenseVector x;
  double alpha = 1.0;  // in (0, 1]
  double f = 0.0;      // f(x)
  double reg = 0.0;    // r(x)
  DenseVector grad_f;
  DenseVector group_norms;  // ||[x]_{G_i}||_2 per group

  double objective() const { return f + reg; }
};

double regularizer_value(const GroupPartition& partition, const DenseVector& x);

double composite_value(const CompositeObjective& obj, const DenseVector& x);

// ||grad of (f+r) restricted to group i||_2; requires [x]_{G_i} != 0.
double composite_grad_group_norm(const GroupPartition& partition, const DenseVector& x,
                                 const DenseVector& grad_f, int group);

// Reduced gradient of f+r over the flattened coordinates of group_ids (all of
// which must have nonzero blocks).
DenseVector reduced_composite_gradient(const GroupPartition& partition, const DenseVector& x,
                                       const DenseVector& grad_f,
                                       const std::vector<int>& group_ids);

// Group-wise proximal-gradient update: with u_i = [x]_{G_i} - alpha grad_i f,
//   [T]_{G_i} = max{1 - alpha lambda_i / ||u_i||, 0} u_i,
// and [T]_{G_i} = 0 when u_i = 0 (the prox of ||.|| maps 0 to 0). Killed
// blocks are written as exact zeros.
DenseVector prox_update(const GroupPartition& partition, const DenseVector& x,
                        const DenseVector& grad_f, double alpha);

// s(x, alpha) = T(x, alpha) - x
DenseVector prox_step(const GroupPartition& partition, const DenseVector& x,
                      const DenseVector& grad_f, double alpha);
DenseVector prox_step(const CompositeObjective& obj, const IterateState& state);

int zero_group_count(const GroupPartition& partition, const DenseVector& x);

// Builds the cached state at x (evaluates f, grad f, r, group norms).
IterateState make_state(const CompositeObjective& obj, DenseVector x, double alpha);

}  // namespace farsa

#endif  // FARSA_CORE_HPP_
