#ifndef FARSA_PARTITION_HPP_
#define FARSA_PARTITION_HPP_

#include <vector>

#include "farsa/core.hpp"
#include "farsa/options.hpp"

// Splits the groups of the current iterate into the set handled by the
// reduced-space CG step (x and T(x, alpha) both nonzero on the block and the
// block is not tiny relative to the gradient) and the complement handled by
// the projected PG step.

namespace farsa {

struct DecompositionResult {
  std::vector<int> icg_bar;  // candidates: nonzero, staying nonzero, not gradient-dominated
  std::vector<int> ismall;   // candidates whose block is small against the reduced gradient
  std::vector<int> icg;      // icg_bar minus ismall
  std::vector<int> ipg;      // every other group
  double chi_cg = 0.0;       // ||[s]_{Icg}||_2 (0 when Icg is empty)
  double chi_pg = 0.0;       // ||[s]_{Ipg}||_2
  // rho[i] for groups in icg: the radius below which a block may be killed by
  // the CG line search; NaN elsewhere.
  std::vector<double> rho;
};

// Groups with [x]_G != 0, [x+s]_G != 0 and ||[x]_G|| >= kappa1 ||grad_G (f+r)||.
std::vector<int> candidate_groups(const IterateState& state, const DenseVector& s,
                                  const CompositeObjective& obj, double kappa1);

// Candidates with ||[x]_G|| < kappa2_i ||grad_{Icg_bar} (f+r)||^p, where
// kappa2_i = kappa2 |G_i| / |icg_bar| under rescaling and plain kappa2 otherwise.
std::vector<int> small_groups(const IterateState& state, const std::vector<int>& icg_bar,
                              const CompositeObjective& obj, const SolveOptions& opts);

DecompositionResult decompose(const IterateState& state, const DenseVector& s,
                              const CompositeObjective& obj, const SolveOptions& opts);

}  // namespace farsa

#endif  // FARSA_PARTITION_HPP_
