#ifndef FARSA_LINESEARCH_HPP_
#define FARSA_LINESEARCH_HPP_

#include <optional>
#include <vector>

#include "farsa/core.hpp"
#include "farsa/options.hpp"
#include "farsa/partition.hpp"

// Projected backtracking searches. The CG search first walks through trial
// points whose near-zero blocks are projected to exact zero (accepting on any
// objective non-increase), then falls back to plain Armijo backtracking; the
// PG search backtracks along the projected proximal step.

namespace farsa {

struct CgSearchResult {
  DenseVector x_next;
  enum class Flag { new_zero, suff_descent } flag = Flag::suff_descent;
  int backtracks = 0;
  double step_size = 1.0;  // xi^backtracks
};

struct PgSearchResult {
  DenseVector x_next;
  enum class Flag { same_alpha, decrease_alpha } flag = Flag::same_alpha;
  int backtracks = 0;
  double step_size = 1.0;
};

// min{rho_i, sin(theta) ||[x]_{G_i}||}: the radius below which the search may
// project a block to zero. Strictly smaller than ||[x]_{G_i}|| since theta is
// an angle in (0, pi/2).
double kill_radius(const IterateState& state, int group, double theta, double rho_i);

// Smallest tau > 0 with ||x_block + tau d_block|| = radius, or nullopt when
// the ray never meets the sphere. Requires ||x_block|| > radius. The larger
// root is taken from the stable quadratic branch and the smaller recovered
// through the product of roots, so no cancellation occurs.
std::optional<double> first_intersection(const DenseVector& x_block,
                                         const DenseVector& d_block, double radius);

// Algorithm for the CG branch: d_full is the padded direction (zero outside
// iset), slope = grad_{I}(f+r)'d. Throws LineSearchFailure past the
// backtracking cap.
CgSearchResult update_cg(const IterateState& state, const CompositeObjective& obj,
                         const DenseVector& d_full, const std::vector<int>& iset,
                         const DecompositionResult& decomposition, double slope,
                         const SolveOptions& opts);

// Backtracking along the projected PG step P_I(s).
PgSearchResult update_pg(const IterateState& state, const CompositeObjective& obj,
                         const DenseVector& s, const std::vector<int>& iset,
                         const SolveOptions& opts);

}  // namespace farsa

#endif  // FARSA_LINESEARCH_HPP_
