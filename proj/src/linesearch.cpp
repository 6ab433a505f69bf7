#include "farsa/linesearch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "farsa/kernels.hpp"

namespace farsa {

double kill_radius(const IterateState& state, int group, double theta, double rho_i) {
  return std::min(rho_i, std::sin(theta) * state.group_norms[group]);
}

std::optional<double> first_intersection(const DenseVector& x_block,
                                         const DenseVector& d_block, double radius) {
  // tau is invariant under scaling x, d and the radius together, so normalize
  // by the largest magnitude first: the raw discriminant b^2 - 4ac otherwise
  // overflows or underflows for blocks far from unit scale.
  double m = std::fabs(radius);
  for (double v : x_block) m = std::max(m, std::fabs(v));
  for (double v : d_block) m = std::max(m, std::fabs(v));
  if (m == 0.0 || !std::isfinite(m)) {
    throw InvalidArgument("first_intersection: block already inside the sphere");
  }
  DenseVector xs = x_block;
  DenseVector ds = d_block;
  for (double& v : xs) v /= m;
  for (double& v : ds) v /= m;
  double r = radius / m;

  // ||x + tau d||^2 = r^2 is a tau^2 + b tau + c = 0 with
  // a = ||d||^2, b = 2 x'd, c = ||x||^2 - r^2 > 0.
  double a = norm2_sq(ds);
  double b = 2.0 * dot(xs, ds);
  double c = norm2_sq(xs) - r * r;
  if (c <= 0.0) {
    throw InvalidArgument("first_intersection: block already inside the sphere");
  }
  if (a == 0.0) return std::nullopt;
  // Both roots share the sign of -b (their product c/a is positive); a ray
  // pointed away from the sphere (b >= 0) never reaches it.
  if (b >= 0.0) return std::nullopt;
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  // Larger root from the stable branch, smaller one via the product of roots.
  double big = (-b + std::sqrt(disc)) / (2.0 * a);
  return c / (a * big);
}

CgSearchResult update_cg(const IterateState& state, const CompositeObjective& obj,
                         const DenseVector& d_full, const std::vector<int>& iset,
                         const DecompositionResult& decomposition, double slope,
                         const SolveOptions& opts) {
  const GroupPartition& part = obj.partition;
  const double f_cur = state.objective();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Per-group first crossing of the kill sphere along the direction.
  std::vector<double> tau(iset.size(), kInf);
  double tau_min = kInf;
  for (std::size_t r = 0; r < iset.size(); ++r) {
    int i = iset[r];
    double radius = kill_radius(state, i, opts.theta, decomposition.rho[i]);
    DenseVector xb, db;
    xb.reserve(part.groups[i].size());
    db.reserve(part.groups[i].size());
    for (int j : part.groups[i]) {
      xb.push_back(state.x[j]);
      db.push_back(d_full[j]);
    }
    std::optional<double> hit = first_intersection(xb, db, radius);
    if (hit) tau[r] = *hit;
    tau_min = std::min(tau_min, tau[r]);
  }

  CgSearchResult result;
  int j = 0;
  double step = 1.0;

  // Phase 1: while the step would land at or inside some kill sphere, project
  // those blocks to exact zero and accept on plain non-increase.
  while (step >= tau_min) {
    if (j > opts.backtrack_cap) {
      throw LineSearchFailure("update_cg: backtracking cap exceeded");
    }
    DenseVector y = state.x;
    for (std::size_t r = 0; r < iset.size(); ++r) {
      int i = iset[r];
      if (step >= tau[r]) {
        for (int jj : part.groups[i]) y[jj] = 0.0;
      } else {
        for (int jj : part.groups[i]) y[jj] = state.x[jj] + step * d_full[jj];
      }
    }
    if (composite_value(obj, y) <= f_cur) {
      result.x_next = std::move(y);
      result.flag = CgSearchResult::Flag::new_zero;
      result.backtracks = j;
      result.step_size = step;
      return result;
    }
    ++j;
    step *= opts.xi;
  }

  // Phase 2: ordinary Armijo backtracking along the full direction.
  while (true) {
    if (j > opts.backtrack_cap) {
      throw LineSearchFailure("update_cg: backtracking cap exceeded");
    }
    DenseVector y = state.x;
    for (int i : iset) {
      for (int jj : part.groups[i]) y[jj] = state.x[jj] + step * d_full[jj];
    }
    if (composite_value(obj, y) <= f_cur + opts.eta * step * slope) {
      result.x_next = std::move(y);
      result.flag = CgSearchResult::Flag::suff_descent;
      result.backtracks = j;
      result.step_size = step;
      return result;
    }
    ++j;
    step *= opts.xi;
  }
}

PgSearchResult update_pg(const IterateState& state, const CompositeObjective& obj,
                         const DenseVector& s, const std::vector<int>& iset,
                         const SolveOptions& opts) {
  const GroupPartition& part = obj.partition;
  const double f_cur = state.objective();

  // P_I(s): the proximal step restricted to the selected groups.
  DenseVector ps(s.size(), 0.0);
  double ps_sq = 0.0;
  for (int i : iset) {
    for (int j : part.groups[i]) {
      ps[j] = s[j];
      ps_sq += s[j] * s[j];
    }
  }
  const double decrease = opts.eta * ps_sq / state.alpha;

  PgSearchResult result;
  int j = 0;
  double step = 1.0;
  while (true) {
    if (j > opts.backtrack_cap) {
      throw LineSearchFailure("update_pg: backtracking cap exceeded");
    }
    DenseVector y = state.x;
    // y = x + step * P_I(s); the unit step lands exactly on [T]_{G_i} for the
    // selected groups (s_j = -x_j on killed blocks), so zeros stay exact.
    for (int i : iset) {
      for (int jj : part.groups[i]) y[jj] = state.x[jj] + step * s[jj];
    }
    if (composite_value(obj, y) <= f_cur - step * decrease) {
      result.x_next = std::move(y);
      result.flag = (j == 0) ? PgSearchResult::Flag::same_alpha
                             : PgSearchResult::Flag::decrease_alpha;
      result.backtracks = j;
      result.step_size = step;
      return result;
    }
    ++j;
    step *= opts.xi;
  }
}

}  // namespace farsa
