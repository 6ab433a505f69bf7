#include "farsa/subspace.hpp"

#include <cassert>
#include <cmath>
#include <memory>

#include "farsa/kernels.hpp"

namespace farsa {

ReducedSystem hessian_model(const IterateState& state, const CompositeObjective& obj,
                            const std::vector<int>& group_ids) {
  const GroupPartition& part = obj.partition;
  ReducedSystem sys;
  sys.coords = flatten_groups(part, group_ids);
  sys.grad = reduced_composite_gradient(part, state.x, state.grad_f, group_ids);

  ReducedHvp loss_hvp = obj.loss->reduced_hessian(state.x, sys.coords);

  // Regularizer curvature per block, in reduced coordinates: block i spans
  // [offset, offset + |G_i|) because flatten_groups keeps group order.
  struct RegBlock {
    std::size_t offset;
    std::size_t size;
    double lambda_over_norm;  // lambda_i / ||x_i||
    DenseVector xhat;         // x_i / ||x_i||
  };
  auto blocks = std::make_shared<std::vector<RegBlock>>();
  std::size_t offset = 0;
  for (int i : group_ids) {
    const std::vector<int>& coords = part.groups[i];
    double xnorm = state.group_norms[i];
    if (xnorm == 0.0) {
      throw NotDifferentiable("hessian_model requested on a zero group block");
    }
    RegBlock blk;
    blk.offset = offset;
    blk.size = coords.size();
    blk.lambda_over_norm = part.weights[i] / xnorm;
    blk.xhat.reserve(coords.size());
    for (int j : coords) blk.xhat.push_back(state.x[j] / xnorm);
    blocks->push_back(std::move(blk));
    offset += coords.size();
  }

  sys.hvp = [loss_hvp, blocks](const DenseVector& v, DenseVector& out) {
    loss_hvp(v, out);
    // add lambda_i/||x_i|| (v_i - xhat (xhat'v_i)) per block
    for (const RegBlock& blk : *blocks) {
      double proj = 0.0;
      for (std::size_t r = 0; r < blk.size; ++r) proj += blk.xhat[r] * v[blk.offset + r];
      for (std::size_t r = 0; r < blk.size; ++r) {
        out[blk.offset + r] +=
            blk.lambda_over_norm * (v[blk.offset + r] - blk.xhat[r] * proj);
      }
    }
  };
  return sys;
}

DenseVector reference_direction(const ReducedSystem& sys) {
  double gg = norm2_sq(sys.grad);
  if (gg == 0.0) throw InvalidArgument("reference_direction: zero reduced gradient");
  DenseVector hg(sys.grad.size());
  sys.hvp(sys.grad, hg);
  double ghg = dot(sys.grad, hg);
  if (ghg <= 0.0) {
    throw NonPositiveCurvature("reference_direction: g'Hg <= 0");
  }
  DenseVector d = sys.grad;
  scale(-gg / ghg, d);
  return d;
}

CgOutcome cg_direction(const ReducedSystem& sys, double grad_full_norm,
                       const SolveOptions& opts) {
  const std::size_t m = sys.grad.size();
  double t0 = norm2(sys.grad);
  if (t0 == 0.0) throw InvalidArgument("cg_direction: zero reduced gradient");

  double target = std::max(std::min(0.1 * t0, std::pow(t0, opts.cg_target_exponent)),
                           opts.cg_residual_floor);
  double step_bound = 1e3 * std::min(1.0, grad_full_norm);

  CgOutcome out;
  out.direction.assign(m, 0.0);
  DenseVector res = sys.grad;  // residual of Hd + g at d = 0
  DenseVector p(m);
  for (std::size_t r = 0; r < m; ++r) p[r] = -res[r];
  DenseVector hp(m);
  double res_sq = norm2_sq(res);

#ifndef NDEBUG
  double model_prev = 0.0;  // m(0) = 0; the model must decrease monotonically
#endif

  int j = 0;
  while (true) {
    sys.hvp(p, hp);
    double curvature = dot(p, hp);
    if (curvature <= 0.0) {
      throw NonPositiveCurvature("cg_direction: p'Hp <= 0 in CG");
    }
    double gamma = res_sq / curvature;
    axpy(gamma, p, out.direction);
    axpy(gamma, hp, res);
    double res_sq_next = norm2_sq(res);
    ++j;

#ifndef NDEBUG
    {
      // m(d) = 1/2 (d'(Hd + g) + g'd); the residual vector is Hd + g.
      double model = 0.5 * (dot(out.direction, res) + dot(sys.grad, out.direction));
      assert(model <= model_prev + 1e-12 * (1.0 + std::fabs(model_prev)));
      model_prev = model;
    }
#endif

    out.iterations = j;
    out.residual_norm = std::sqrt(res_sq_next);
    if (out.residual_norm <= target) {
      out.stop_reason = CgStop::residual_target;
      break;
    }
    if (norm2(out.direction) >= step_bound) {
      out.stop_reason = CgStop::step_too_big;
      break;
    }
    if (j >= static_cast<int>(m)) {
      out.stop_reason = CgStop::dimension_cap;
      break;
    }
    double beta = res_sq_next / res_sq;
    for (std::size_t r = 0; r < m; ++r) p[r] = beta * p[r] - res[r];
    res_sq = res_sq_next;
  }

  out.inexact_certified = out.residual_norm <= opts.mu * std::pow(t0, opts.q);
  return out;
}

}  // namespace farsa
