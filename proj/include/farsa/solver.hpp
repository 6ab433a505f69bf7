#ifndef FARSA_SOLVER_HPP_
#define FARSA_SOLVER_HPP_

#include <cstdint>
#include <vector>

#include "farsa/core.hpp"
#include "farsa/options.hpp"

// The driver: per iteration it takes the proximal-gradient step, splits the
// groups, and either runs the reduced-space CG step with the projected line
// search or the projected PG step, updating the PG parameter by the selected
// policy. A full-space variant of the PG branch doubles as the baseline
// first-order solver.

namespace farsa {

enum class SolveStatus { optimal, iter_limit, time_limit, linesearch_failure };

enum class StepType { cg, pg };
enum class StepFlag { new_zero, suff_descent, same_alpha, decrease_alpha };

const char* to_string(SolveStatus status);
const char* to_string(StepType type);
const char* to_string(StepFlag flag);

struct TraceRecord {
  std::int64_t iter = 0;
  StepType type = StepType::pg;
  StepFlag flag = StepFlag::same_alpha;
  double chi_cg = 0.0;     // stationarity split at the start of the iteration
  double chi_pg = 0.0;
  double alpha = 1.0;      // PG parameter used by the iteration
  double objective = 0.0;  // f + r at the accepted point
  int zero_groups = 0;     // zero blocks at the accepted point
  int cg_iters = 0;        // 0 on PG iterations
  int backtracks = 0;
};

struct SolveReport {
  DenseVector x_final;
  SolveStatus status = SolveStatus::optimal;
  std::int64_t iterations = 0;
  double final_objective = 0.0;
  // max{chi_cg, chi_pg} at the last decomposition (NaN if none was reached)
  double chi_final = 0.0;
  double alpha0 = 1.0;
  double chi_cg0 = 0.0;
  double chi_pg0 = 0.0;
  double seconds = 0.0;
  // Iteration counts by flag; the four always sum to `iterations`.
  std::int64_t count_cg_zero = 0;
  std::int64_t count_cg_descent = 0;
  std::int64_t count_pg_same = 0;
  std::int64_t count_pg_decrease = 0;
  std::vector<TraceRecord> trace;
  std::vector<DenseVector> iterates;  // populated only when record_iterates is set
};

// alpha_{k+1} = zeta * alpha_k when the PG search backtracked, else unchanged.
double update_alpha_basic(double alpha, bool decrease_flag, double zeta);

// Curvature estimate along the accepted displacement:
//   alpha_hat = ||dx||^2 / (2 (f_next - f_cur - grad_f'dx)),
// returning min{1, alpha_hat/2}, or min{alpha, alpha_hat/2} once the increase
// budget is spent; a nonpositive denominator (no curvature seen) yields 1.
double update_alpha_adaptive(const DenseVector& x, const DenseVector& x_next,
                             const DenseVector& grad_f, double f_cur, double f_next,
                             double alpha, bool capped);

// min{1, ||x0 - y0|| / ||grad f(x0) - grad f(y0)||} with y0 a seeded random
// point at distance 1e-8 from x0 (1 when the gradients coincide).
double estimate_alpha0(const SmoothLoss& loss, const DenseVector& x0, std::uint64_t seed);

SolveReport solve(const CompositeObjective& obj, DenseVector x0, const SolveOptions& opts);

// ISTA-style full-space proximal gradient: every iteration is a PG branch
// over all groups, with the same backtracking search and alpha policy.
SolveReport solve_baseline_pg(const CompositeObjective& obj, DenseVector x0,
                              const SolveOptions& opts);

}  // namespace farsa

#endif  // FARSA_SOLVER_HPP_
