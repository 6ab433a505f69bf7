#include "farsa/partition.hpp"

#include <cmath>
#include <limits>

#include "farsa/kernels.hpp"

namespace farsa {

namespace {

// ||grad_{G_i}(f+r)|| for every group with a nonzero block, NaN elsewhere.
std::vector<double> group_grad_norms(const IterateState& state, const CompositeObjective& obj) {
  const GroupPartition& part = obj.partition;
  std::vector<double> norms(part.num_groups(), std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < part.num_groups(); ++i) {
    if (state.group_norms[i] != 0.0) {
      norms[i] = composite_grad_group_norm(part, state.x, state.grad_f, i);
    }
  }
  return norms;
}

bool block_of_sum_is_zero(const DenseVector& x, const DenseVector& s,
                          const std::vector<int>& coords) {
  for (int j : coords) {
    if (x[j] + s[j] != 0.0) return false;
  }
  return true;
}

}  // namespace

std::vector<int> candidate_groups(const IterateState& state, const DenseVector& s,
                                  const CompositeObjective& obj, double kappa1) {
  const GroupPartition& part = obj.partition;
  std::vector<int> icg_bar;
  for (int i = 0; i < part.num_groups(); ++i) {
    if (state.group_norms[i] == 0.0) continue;
    if (block_of_sum_is_zero(state.x, s, part.groups[i])) continue;
    double gnorm = composite_grad_group_norm(part, state.x, state.grad_f, i);
    if (state.group_norms[i] >= kappa1 * gnorm) icg_bar.push_back(i);
  }
  return icg_bar;
}

std::vector<int> small_groups(const IterateState& state, const std::vector<int>& icg_bar,
                              const CompositeObjective& obj, const SolveOptions& opts) {
  const GroupPartition& part = obj.partition;
  double grad_sq = 0.0;
  for (int i : icg_bar) {
    double g = composite_grad_group_norm(part, state.x, state.grad_f, i);
    grad_sq += g * g;
  }
  double grad_pow = std::pow(std::sqrt(grad_sq), opts.p);
  std::vector<int> ismall;
  for (int i : icg_bar) {
    double kappa2_i = opts.kappa2;
    if (opts.kappa2_rescale) {
      kappa2_i *= static_cast<double>(part.groups[i].size()) /
                  static_cast<double>(icg_bar.size());
    }
    if (state.group_norms[i] < kappa2_i * grad_pow) ismall.push_back(i);
  }
  return ismall;
}

DecompositionResult decompose(const IterateState& state, const DenseVector& s,
                              const CompositeObjective& obj, const SolveOptions& opts) {
  const GroupPartition& part = obj.partition;
  const int ng = part.num_groups();
  std::vector<double> gnorm = group_grad_norms(state, obj);

  DecompositionResult out;
  out.rho.assign(ng, std::numeric_limits<double>::quiet_NaN());

  std::vector<char> in_icg_bar(ng, 0);
  double grad_bar_sq = 0.0;  // ||grad_{Icg_bar}(f+r)||^2
  for (int i = 0; i < ng; ++i) {
    if (state.group_norms[i] == 0.0) continue;
    if (block_of_sum_is_zero(state.x, s, part.groups[i])) continue;
    if (state.group_norms[i] >= opts.kappa1 * gnorm[i]) {
      out.icg_bar.push_back(i);
      in_icg_bar[i] = 1;
      grad_bar_sq += gnorm[i] * gnorm[i];
    }
  }

  double grad_bar_pow = std::pow(std::sqrt(grad_bar_sq), opts.p);
  auto kappa2_for = [&](int i) {
    double k = opts.kappa2;
    if (opts.kappa2_rescale && !out.icg_bar.empty()) {
      k *= static_cast<double>(part.groups[i].size()) /
           static_cast<double>(out.icg_bar.size());
    }
    return k;
  };

  std::vector<char> in_icg(ng, 0);
  double grad_cg_sq = 0.0;  // ||grad_{Icg}(f+r)||^2
  for (int i : out.icg_bar) {
    if (state.group_norms[i] < kappa2_for(i) * grad_bar_pow) {
      out.ismall.push_back(i);
    } else {
      out.icg.push_back(i);
      in_icg[i] = 1;
      grad_cg_sq += gnorm[i] * gnorm[i];
    }
  }

  double chi_cg_sq = 0.0;
  double chi_pg_sq = 0.0;
  for (int i = 0; i < ng; ++i) {
    double block_sq = 0.0;
    for (int j : part.groups[i]) block_sq += s[j] * s[j];
    if (in_icg[i]) {
      chi_cg_sq += block_sq;
    } else {
      out.ipg.push_back(i);
      chi_pg_sq += block_sq;
    }
  }
  out.chi_cg = std::sqrt(chi_cg_sq);
  out.chi_pg = std::sqrt(chi_pg_sq);

  double grad_cg_pow = std::pow(std::sqrt(grad_cg_sq), opts.p);
  for (int i : out.icg) {
    out.rho[i] = std::max(opts.kappa1 * gnorm[i], kappa2_for(i) * grad_cg_pow);
  }
  return out;
}

}  // namespace farsa
