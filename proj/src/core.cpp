#include "farsa/core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "farsa/kernels.hpp"

namespace farsa {

void GroupPartition::validate() const {
  if (n < 0) throw InvalidArgument("GroupPartition: negative dimension");
  if (weights.size() != groups.size()) {
    throw InvalidArgument("GroupPartition: one weight per group required");
  }
  std::vector<char> seen(n, 0);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].empty()) throw InvalidArgument("GroupPartition: empty group");
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw InvalidArgument("GroupPartition: weights must be finite and nonnegative");
    }
    for (int j : groups[i]) {
      if (j < 0 || j >= n) throw InvalidArgument("GroupPartition: index out of range");
      if (seen[j]) throw InvalidArgument("GroupPartition: groups must be disjoint");
      seen[j] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw InvalidArgument("GroupPartition: groups must cover every coordinate");
  }
}

std::vector<int> flatten_groups(const GroupPartition& partition,
                                const std::vector<int>& group_ids) {
  std::vector<int> coords;
  for (int g : group_ids) {
    coords.insert(coords.end(), partition.groups[g].begin(), partition.groups[g].end());
  }
  return coords;
}

double regularizer_value(const GroupPartition& partition, const DenseVector& x) {
  double acc = 0.0;
  for (int i = 0; i < partition.num_groups(); ++i) {
    acc += partition.weights[i] * norm2_on(x, partition.groups[i]);
  }
  return acc;
}

double composite_value(const CompositeObjective& obj, const DenseVector& x) {
  return obj.loss->value(x) + regularizer_value(obj.partition, x);
}

double composite_grad_group_norm(const GroupPartition& partition, const DenseVector& x,
                                 const DenseVector& grad_f, int group) {
  const std::vector<int>& coords = partition.groups[group];
  double xnorm = norm2_on(x, coords);
  if (xnorm == 0.0) {
    throw NotDifferentiable("composite gradient requested on a zero group block");
  }
  double lam = partition.weights[group];
  double acc = 0.0;
  for (int j : coords) {
    double v = grad_f[j] + lam * x[j] / xnorm;
    acc += v * v;
  }
  return std::sqrt(acc);
}

DenseVector reduced_composite_gradient(const GroupPartition& partition, const DenseVector& x,
                                       const DenseVector& grad_f,
                                       const std::vector<int>& group_ids) {
  DenseVector g;
  for (int i : group_ids) {
    const std::vector<int>& coords = partition.groups[i];
    double xnorm = norm2_on(x, coords);
    if (xnorm == 0.0) {
      throw NotDifferentiable("composite gradient requested on a zero group block");
    }
    double lam = partition.weights[i];
    for (int j : coords) g.push_back(grad_f[j] + lam * x[j] / xnorm);
  }
  return g;
}

DenseVector prox_update(const GroupPartition& partition, const DenseVector& x,
                        const DenseVector& grad_f, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("prox_update: alpha must be positive");
  if (x.size() != grad_f.size() || static_cast<int>(x.size()) != partition.n) {
    throw InvalidArgument("prox_update: dimension mismatch");
  }
  DenseVector t(x.size());
  for (int i = 0; i < partition.num_groups(); ++i) {
    const std::vector<int>& coords = partition.groups[i];
    double unorm_sq = 0.0;
    for (int j : coords) {
      double u = x[j] - alpha * grad_f[j];
      unorm_sq += u * u;
    }
    double unorm = std::sqrt(unorm_sq);
    double shrink = alpha * partition.weights[i];
    if (unorm <= shrink) {
      for (int j : coords) t[j] = 0.0;
    } else {
      double factor = 1.0 - shrink / unorm;
      for (int j : coords) t[j] = factor * (x[j] - alpha * grad_f[j]);
    }
  }
  return t;
}

DenseVector prox_step(const GroupPartition& partition, const DenseVector& x,
                      const DenseVector& grad_f, double alpha) {
  DenseVector s = prox_update(partition, x, grad_f, alpha);
  for (std::size_t j = 0; j < x.size(); ++j) s[j] -= x[j];
  return s;
}

DenseVector prox_step(const CompositeObjective& obj, const IterateState& state) {
  return prox_step(obj.partition, state.x, state.grad_f, state.alpha);
}

int zero_group_count(const GroupPartition& partition, const DenseVector& x) {
  int count = 0;
  for (const std::vector<int>& coords : partition.groups) {
    if (is_zero_on(x, coords)) ++count;
  }
  return count;
}

IterateState make_state(const CompositeObjective& obj, DenseVector x, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("IterateState: alpha must lie in (0, 1]");
  }
  if (!all_finite(x)) throw InvalidArgument("IterateState: x must be finite");
  IterateState st;
  st.alpha = alpha;
  st.f = obj.loss->value(x);
  st.grad_f = obj.loss->gradient(x);
  st.reg = regularizer_value(obj.partition, x);
  st.group_norms.resize(obj.partition.num_groups());
  for (int i = 0; i < obj.partition.num_groups(); ++i) {
    st.group_norms[i] = norm2_on(x, obj.partition.groups[i]);
  }
  st.x = std::move(x);
  return st;
}

}  // namespace farsa
