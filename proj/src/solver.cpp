#include "farsa/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include "farsa/kernels.hpp"
#include "farsa/linesearch.hpp"
#include "farsa/partition.hpp"
#include "farsa/subspace.hpp"

namespace farsa {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Greedy sub-selection for phi < 1: largest ||[s]_{G_i}|| blocks first until
// the kept mass reaches phi * chi. With phi = 1 the whole set is kept.
std::vector<int> select_groups(const GroupPartition& part, const std::vector<int>& group_ids,
                               const DenseVector& s, double phi, double chi) {
  if (phi >= 1.0 || group_ids.size() <= 1) return group_ids;
  std::vector<std::pair<double, int>> by_mass;
  by_mass.reserve(group_ids.size());
  for (int i : group_ids) {
    double block_sq = 0.0;
    for (int j : part.groups[i]) block_sq += s[j] * s[j];
    by_mass.emplace_back(block_sq, i);
  }
  std::sort(by_mass.begin(), by_mass.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const double need = phi * phi * chi * chi;
  std::vector<int> chosen;
  double kept = 0.0;
  for (const auto& [mass, id] : by_mass) {
    chosen.push_back(id);
    kept += mass;
    if (kept >= need) break;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

struct StepOutcome {
  DenseVector x_next;
  StepFlag flag;
  int cg_iters = 0;
  int backtracks = 0;
};

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::iter_limit: return "iter_limit";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::linesearch_failure: return "linesearch_failure";
  }
  return "unknown";
}

const char* to_string(StepType type) {
  return type == StepType::cg ? "cg" : "pg";
}

const char* to_string(StepFlag flag) {
  switch (flag) {
    case StepFlag::new_zero: return "new_zero";
    case StepFlag::suff_descent: return "suff_descent";
    case StepFlag::same_alpha: return "same_alpha";
    case StepFlag::decrease_alpha: return "decrease_alpha";
  }
  return "unknown";
}

double update_alpha_basic(double alpha, bool decrease_flag, double zeta) {
  return decrease_flag ? zeta * alpha : alpha;
}

double update_alpha_adaptive(const DenseVector& x, const DenseVector& x_next,
                             const DenseVector& grad_f, double f_cur, double f_next,
                             double alpha, bool capped) {
  double dx_sq = 0.0;
  double slope = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double dx = x_next[j] - x[j];
    dx_sq += dx * dx;
    slope += grad_f[j] * dx;
  }
  double denom = 2.0 * (f_next - f_cur - slope);
  if (!(denom > 0.0) || dx_sq == 0.0) return 1.0;
  double half_hat = 0.5 * (dx_sq / denom);
  return capped ? std::min(alpha, half_hat) : std::min(1.0, half_hat);
}

double estimate_alpha0(const SmoothLoss& loss, const DenseVector& x0, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseVector u(x0.size());
  for (double& v : u) v = gauss(rng);
  double unorm = norm2(u);
  if (unorm == 0.0) {
    u.assign(x0.size(), 0.0);
    u[0] = 1.0;
    unorm = 1.0;
  }
  const double dist = 1e-8;
  DenseVector y0 = x0;
  axpy(dist / unorm, u, y0);
  DenseVector g0 = loss.gradient(x0);
  DenseVector g1 = loss.gradient(y0);
  double diff_sq = 0.0;
  for (std::size_t j = 0; j < g0.size(); ++j) {
    double d = g0[j] - g1[j];
    diff_sq += d * d;
  }
  if (diff_sq == 0.0) return 1.0;
  return std::min(1.0, dist / std::sqrt(diff_sq));
}

namespace {

// Shared driver. `full_space_pg` forces the PG branch over all groups, which
// is exactly the baseline first-order method.
SolveReport run_solver(const CompositeObjective& obj, DenseVector x0, const SolveOptions& opts,
                       bool full_space_pg) {
  obj.partition.validate();
  if (static_cast<int>(x0.size()) != obj.dim()) {
    throw InvalidArgument("solve: x0 has the wrong dimension");
  }
  const auto t_start = Clock::now();

  SolveReport rep;
  rep.chi_final = std::numeric_limits<double>::quiet_NaN();
  double alpha = opts.alpha0 ? *opts.alpha0 : estimate_alpha0(*obj.loss, x0, opts.seed);
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("solve: alpha0 must lie in (0, 1]");
  }
  rep.alpha0 = alpha;

  IterateState state = make_state(obj, std::move(x0), alpha);
  if (opts.record_iterates) rep.iterates.push_back(state.x);

  std::vector<int> all_groups(obj.partition.num_groups());
  std::iota(all_groups.begin(), all_groups.end(), 0);

  double phi_cur = opts.phi_switch ? 0.8 : opts.phi;
  int alpha_increases = 0;
  double chi_scale = 1.0;
  std::int64_t k = 0;

  while (true) {
    if (k >= opts.max_iter) {
      rep.status = SolveStatus::iter_limit;
      break;
    }
    if (seconds_since(t_start) > opts.max_seconds) {
      rep.status = SolveStatus::time_limit;
      break;
    }

    DenseVector s = prox_step(obj.partition, state.x, state.grad_f, state.alpha);
    DecompositionResult dec;
    if (full_space_pg) {
      dec.ipg = all_groups;
      dec.chi_pg = norm2(s);
    } else {
      dec = decompose(state, s, obj, opts);
    }
    rep.chi_final = std::max(dec.chi_cg, dec.chi_pg);
    if (k == 0) {
      rep.chi_cg0 = dec.chi_cg;
      rep.chi_pg0 = dec.chi_pg;
      chi_scale = std::max({dec.chi_cg, dec.chi_pg, 1.0});
    }
    if (std::max(dec.chi_cg, dec.chi_pg) <= opts.tol_rel * chi_scale) {
      rep.status = SolveStatus::optimal;
      break;
    }

    StepOutcome step;
    StepType type = StepType::pg;
    bool subspace_degenerate = false;
    try {
      if (!full_space_pg && dec.chi_pg <= dec.chi_cg) {
        type = StepType::cg;
        std::vector<int> isel =
            select_groups(obj.partition, dec.icg, s, phi_cur, dec.chi_cg);
        ReducedSystem sys = hessian_model(state, obj, isel);
        if (norm2_sq(sys.grad) == 0.0) {
          // Stationary on the whole candidate subspace: the measure chi_cg is
          // pure roundoff here, so report the point as optimal.
          subspace_degenerate = true;
        } else {
          CgOutcome cg = cg_direction(sys, norm2(sys.grad), opts);
          DenseVector d_full(obj.dim(), 0.0);
          for (std::size_t r = 0; r < sys.coords.size(); ++r) {
            d_full[sys.coords[r]] = cg.direction[r];
          }
          double slope = dot(sys.grad, cg.direction);
          CgSearchResult ls = update_cg(state, obj, d_full, isel, dec, slope, opts);
          step.x_next = std::move(ls.x_next);
          step.flag = ls.flag == CgSearchResult::Flag::new_zero ? StepFlag::new_zero
                                                                : StepFlag::suff_descent;
          step.cg_iters = cg.iterations;
          step.backtracks = ls.backtracks;
        }
      } else {
        type = StepType::pg;
        std::vector<int> isel =
            full_space_pg ? all_groups
                          : select_groups(obj.partition, dec.ipg, s, phi_cur, dec.chi_pg);
        PgSearchResult ls = update_pg(state, obj, s, isel, opts);
        step.x_next = std::move(ls.x_next);
        step.flag = ls.flag == PgSearchResult::Flag::same_alpha ? StepFlag::same_alpha
                                                                : StepFlag::decrease_alpha;
        step.backtracks = ls.backtracks;
      }
    } catch (const LineSearchFailure&) {
      rep.status = SolveStatus::linesearch_failure;
      break;
    }
    if (subspace_degenerate) {
      rep.status = SolveStatus::optimal;
      break;
    }

    IterateState next_state = make_state(obj, std::move(step.x_next), 1.0);

    double alpha_next;
    if (opts.alpha_update == AlphaUpdate::adaptive) {
      alpha_next = update_alpha_adaptive(state.x, next_state.x, state.grad_f, state.f,
                                         next_state.f, state.alpha,
                                         alpha_increases >= opts.max_alpha_increases);
      if (alpha_next > state.alpha) ++alpha_increases;
    } else if (type == StepType::pg) {
      alpha_next = update_alpha_basic(state.alpha, step.flag == StepFlag::decrease_alpha,
                                      opts.zeta);
    } else {
      alpha_next = state.alpha;
    }
    next_state.alpha = alpha_next;

    if (opts.phi_switch && type == StepType::cg &&
        state.objective() - next_state.objective() <= 1e-3) {
      phi_cur = 1.0;
    }

    TraceRecord rec;
    rec.iter = k;
    rec.type = type;
    rec.flag = step.flag;
    rec.chi_cg = dec.chi_cg;
    rec.chi_pg = dec.chi_pg;
    rec.alpha = state.alpha;
    rec.objective = next_state.objective();
    rec.zero_groups = zero_group_count(obj.partition, next_state.x);
    rec.cg_iters = step.cg_iters;
    rec.backtracks = step.backtracks;
    rep.trace.push_back(rec);

    switch (step.flag) {
      case StepFlag::new_zero: ++rep.count_cg_zero; break;
      case StepFlag::suff_descent: ++rep.count_cg_descent; break;
      case StepFlag::same_alpha: ++rep.count_pg_same; break;
      case StepFlag::decrease_alpha: ++rep.count_pg_decrease; break;
    }

    state = std::move(next_state);
    if (opts.record_iterates) rep.iterates.push_back(state.x);
    ++k;
  }

  rep.x_final = std::move(state.x);
  rep.final_objective = state.f + state.reg;
  rep.iterations = k;
  rep.seconds = seconds_since(t_start);
  return rep;
}

}  // namespace

SolveReport solve(const CompositeObjective& obj, DenseVector x0, const SolveOptions& opts) {
  return run_solver(obj, std::move(x0), opts, /*full_space_pg=*/false);
}

SolveReport solve_baseline_pg(const CompositeObjective& obj, DenseVector x0,
                              const SolveOptions& opts) {
  return run_solver(obj, std::move(x0), opts, /*full_space_pg=*/true);
}

}  // namespace farsa
