#ifndef FARSA_SUBSPACE_HPP_
#define FARSA_SUBSPACE_HPP_

#include <vector>

#include "farsa/core.hpp"
#include "farsa/options.hpp"

// Reduced-space model g'd + 1/2 d'Hd over the selected groups and the linear
// CG iteration that produces the search direction.

namespace farsa {

struct ReducedSystem {
  DenseVector grad;         // reduced gradient of f+r
  ReducedHvp hvp;           // v -> [H]_{I,I} v
  std::vector<int> coords;  // flat coordinates of the selected groups
};

enum class CgStop { residual_target, step_too_big, dimension_cap };

struct CgOutcome {
  DenseVector direction;  // reduced; satisfies the descent and model conditions
  double residual_norm = 0.0;  // ||H d + g|| at exit
  int iterations = 0;
  CgStop stop_reason = CgStop::residual_target;
  // Whether residual <= mu ||g||^q held at exit; recorded, never enforced.
  bool inexact_certified = false;
};

// Builds the reduced gradient and Hessian-model operator over group_ids. The
// model is the loss's (possibly clamped) reduced Hessian plus the exact
// regularizer block lambda_i (I/||x_i|| - x_i x_i'/||x_i||^3) per group.
ReducedSystem hessian_model(const IterateState& state, const CompositeObjective& obj,
                            const std::vector<int>& group_ids);

// -(||g||^2 / g'Hg) g, the steepest-descent reference point: every CG iterate
// must be at least this good. Throws NonPositiveCurvature when g'Hg <= 0.
DenseVector reference_direction(const ReducedSystem& sys);

// Linear CG on H d = -g from d = 0. Stops on the first of: residual below
// max{min{0.1 r0, r0^cg_target_exponent}, cg_residual_floor}; ||d|| at least
// 1e3 min{1, grad_full_norm}; iteration count reaching dim(g). At least one
// iteration is always taken so the exit direction is never the zero vector.
CgOutcome cg_direction(const ReducedSystem& sys, double grad_full_norm,
                       const SolveOptions& opts);

}  // namespace farsa

#endif  // FARSA_SUBSPACE_HPP_
