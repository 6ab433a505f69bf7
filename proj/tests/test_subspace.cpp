#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "farsa/core.hpp"
#include "farsa/kernels.hpp"
#include "farsa/subspace.hpp"
#include "support/oracles.hpp"

using farsa::CgOutcome;
using farsa::CgStop;
using farsa::DenseVector;
using farsa::ReducedSystem;
using farsa::SolveOptions;

namespace {

// fully nonzero iterate so every group is differentiable
farsa::IterateState nonzero_iterate(std::mt19937_64& rng, const oracles::TestProblem& prob,
                                    double alpha) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseVector x(prob.obj.dim());
  for (double& v : x) {
    v = gauss(rng);
    if (std::fabs(v) < 0.2) v = (v < 0.0 ? -0.2 : 0.2);
  }
  return farsa::make_state(prob.obj, x, alpha);
}

// composite gradient of f + sum_i lambda_i ||x_i||, computed by hand
DenseVector composite_grad(const oracles::TestProblem& prob, const DenseVector& x) {
  DenseVector g = prob.loss->gradient(x);
  const farsa::GroupPartition& part = prob.obj.partition;
  for (std::size_t i = 0; i < part.groups.size(); ++i) {
    double nrm = farsa::norm2_on(x, part.groups[i]);
    for (int j : part.groups[i]) g[j] += part.weights[i] * x[j] / nrm;
  }
  return g;
}

ReducedSystem diag_system(DenseVector grad, DenseVector diag) {
  ReducedSystem sys;
  sys.grad = std::move(grad);
  sys.coords.resize(sys.grad.size());
  for (std::size_t r = 0; r < sys.coords.size(); ++r) sys.coords[r] = static_cast<int>(r);
  DenseVector d = std::move(diag);
  sys.hvp = [d](const DenseVector& v, DenseVector& out) {
    out.resize(v.size());
    for (std::size_t r = 0; r < v.size(); ++r) out[r] = d[r] * v[r];
  };
  return sys;
}

}  // namespace

TEST_CASE("hessian model matches finite differences of the composite gradient") {
  std::mt19937_64 rng(201);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    oracles::TestProblem prob = oracles::random_quadratic(rng, 12);
    farsa::IterateState state = nonzero_iterate(rng, prob, 0.5);
    // a proper subset of the groups (skip group 1) to exercise the reduction
    std::vector<int> group_ids;
    for (int i = 0; i < prob.obj.partition.num_groups(); ++i) {
      if (i != 1) group_ids.push_back(i);
    }
    ReducedSystem sys = farsa::hessian_model(state, prob.obj, group_ids);
    CHECK(sys.coords == farsa::flatten_groups(prob.obj.partition, group_ids));

    // reduced gradient of f + r
    DenseVector full = composite_grad(prob, state.x);
    REQUIRE(sys.grad.size() == sys.coords.size());
    for (std::size_t r = 0; r < sys.coords.size(); ++r) {
      CHECK(sys.grad[r] == doctest::Approx(full[sys.coords[r]]).epsilon(1e-12));
    }

    // action of the operator against a central difference of the gradient
    DenseVector v(sys.coords.size());
    for (double& e : v) e = gauss(rng);
    DenseVector hv(sys.coords.size());
    sys.hvp(v, hv);

    const double h = 1e-6;
    DenseVector xp = state.x, xm = state.x;
    for (std::size_t r = 0; r < sys.coords.size(); ++r) {
      xp[sys.coords[r]] += h * v[r];
      xm[sys.coords[r]] -= h * v[r];
    }
    DenseVector gp = composite_grad(prob, xp);
    DenseVector gm = composite_grad(prob, xm);
    for (std::size_t r = 0; r < sys.coords.size(); ++r) {
      double fd = (gp[sys.coords[r]] - gm[sys.coords[r]]) / (2.0 * h);
      CHECK(std::fabs(hv[r] - fd) <= 5e-4 * (1.0 + std::fabs(fd)));
    }
  }
}

TEST_CASE("hessian model refuses zero blocks") {
  std::mt19937_64 rng(203);
  oracles::TestProblem prob = oracles::random_quadratic(rng, 9);
  DenseVector x(9, 1.0);
  for (int j : prob.obj.partition.groups[1]) x[j] = 0.0;
  farsa::IterateState state = farsa::make_state(prob.obj, x, 1.0);
  CHECK_THROWS_AS(farsa::hessian_model(state, prob.obj, {0, 1}),
                  farsa::NotDifferentiable);
  CHECK_NOTHROW(farsa::hessian_model(state, prob.obj, {0, 2}));
}

TEST_CASE("reference direction is the exact steepest-descent minimizer") {
  ReducedSystem sys = diag_system({1.0, -2.0, 0.5}, {2.0, 1.0, 4.0});
  DenseVector hg = {2.0, -2.0, 2.0};
  double gg = 1.0 + 4.0 + 0.25;
  double ghg = 2.0 + 4.0 + 1.0;
  DenseVector d = farsa::reference_direction(sys);
  for (int r = 0; r < 3; ++r) {
    CHECK(d[r] == doctest::Approx(-(gg / ghg) * sys.grad[r]).epsilon(1e-15));
  }

  ReducedSystem zero_grad = diag_system({0.0, 0.0}, {1.0, 1.0});
  CHECK_THROWS_AS(farsa::reference_direction(zero_grad), farsa::InvalidArgument);
  ReducedSystem concave = diag_system({1.0, 1.0}, {-1.0, -1.0});
  CHECK_THROWS_AS(farsa::reference_direction(concave), farsa::NonPositiveCurvature);
}

TEST_CASE("cg directions dominate the reference point and keep the model nonpositive") {
  std::mt19937_64 rng(207);
  SolveOptions opts;
  for (int trial = 0; trial < 25; ++trial) {
    oracles::TestProblem prob = oracles::random_quadratic(rng, 10);
    farsa::IterateState state = nonzero_iterate(rng, prob, 0.8);
    std::vector<int> group_ids;
    for (std::size_t i = 0; i < prob.obj.partition.groups.size(); ++i) {
      group_ids.push_back(static_cast<int>(i));
    }
    ReducedSystem sys = farsa::hessian_model(state, prob.obj, group_ids);
    if (farsa::norm2(sys.grad) == 0.0) continue;
    DenseVector dref = farsa::reference_direction(sys);
    CgOutcome out = farsa::cg_direction(sys, farsa::norm2(state.grad_f), opts);

    double gd = farsa::dot(sys.grad, out.direction);
    double gdref = farsa::dot(sys.grad, dref);
    CHECK(gd <= gdref + 1e-10 * (1.0 + std::fabs(gdref)));

    DenseVector hd(out.direction.size());
    sys.hvp(out.direction, hd);
    double model = gd + 0.5 * farsa::dot(out.direction, hd);
    CHECK(model <= 1e-10 * (1.0 + std::fabs(gd)));
    CHECK(out.iterations >= 1);
  }
}

TEST_CASE("cg reaches the exact newton direction when the target is tight") {
  // ||g|| ~ 0.33 < 1 so the exponent drives the accuracy term below the floor
  // and the floor 1e-12 is the binding target
  ReducedSystem sys = diag_system({0.1, 0.1, -0.3, 0.025}, {1.0, 2.0, 5.0, 0.5});
  SolveOptions opts;
  opts.cg_residual_floor = 1e-12;
  opts.cg_target_exponent = 30.0;
  CgOutcome out = farsa::cg_direction(sys, 1.0, opts);
  CHECK(out.stop_reason == CgStop::residual_target);
  CHECK(out.residual_norm <= 1e-12);
  // H d = -g componentwise
  CHECK(out.direction[0] == doctest::Approx(-0.1).epsilon(1e-10));
  CHECK(out.direction[1] == doctest::Approx(-0.05).epsilon(1e-10));
  CHECK(out.direction[2] == doctest::Approx(0.06).epsilon(1e-10));
  CHECK(out.direction[3] == doctest::Approx(-0.05).epsilon(1e-10));
  CHECK(out.iterations <= 4);
}

TEST_CASE("cg stops when the direction outgrows the scaled gradient bound") {
  // diag(1,100), g = (1,1): after one iteration the residual is still ~1.39
  // while ||d|| ~ 0.028, so with grad_full_norm = 1e-6 the 1e3 min{1,||grad||}
  // bound (1e-3) trips first.
  ReducedSystem sys = diag_system({1.0, 1.0}, {1.0, 100.0});
  SolveOptions opts;
  CgOutcome out = farsa::cg_direction(sys, 1e-6, opts);
  CHECK(out.stop_reason == CgStop::step_too_big);
  CHECK(out.iterations == 1);
  CHECK(farsa::norm2(out.direction) >= 1e3 * 1e-6);
}

TEST_CASE("cg stops at the subspace dimension when the target is unreachable") {
  // ||g|| ~ 1.4e-3 < 1: the exponent term underflows to zero and the floor
  // 1e-300 is below anything rounding can deliver
  ReducedSystem sys = diag_system({1e-3, 1e-3}, {1.0, 100.0});
  SolveOptions opts;
  opts.cg_residual_floor = 1e-300;
  opts.cg_target_exponent = 300.0;
  CgOutcome out = farsa::cg_direction(sys, 1.0, opts);
  CHECK(out.stop_reason == CgStop::dimension_cap);
  CHECK(out.iterations == 2);
  // it still solved the system to rounding error on the way
  CHECK(out.direction[0] == doctest::Approx(-1e-3).epsilon(1e-12));
  CHECK(out.direction[1] == doctest::Approx(-1e-5).epsilon(1e-12));
}

TEST_CASE("cg always takes one iteration even when the gradient is already tiny") {
  ReducedSystem sys = diag_system({1e-12, 0.0}, {1.0, 1.0});
  SolveOptions opts;  // floor 1e-10 exceeds the gradient norm
  CgOutcome out = farsa::cg_direction(sys, 1e-12, opts);
  CHECK(out.iterations == 1);
  CHECK(out.direction[0] == doctest::Approx(-1e-12).epsilon(1e-12));
  CHECK(out.stop_reason == CgStop::residual_target);
}

TEST_CASE("cg reports the inexactness certificate without enforcing it") {
  ReducedSystem sys = diag_system({2.0, -1.0, 0.5}, {3.0, 1.0, 2.0});
  SolveOptions opts;
  CgOutcome loose = farsa::cg_direction(sys, 1.0, opts);
  CHECK(loose.inexact_certified);  // mu = 1, q = 1: target is far inside mu ||g||
  opts.mu = 1e-30;
  CgOutcome strict = farsa::cg_direction(sys, 1.0, opts);
  CHECK_FALSE(strict.inexact_certified);
  CHECK(strict.stop_reason == loose.stop_reason);
  CHECK(strict.iterations == loose.iterations);
}

TEST_CASE("cg rejects nonpositive curvature and a zero gradient") {
  ReducedSystem concave = diag_system({1.0, 1.0}, {-2.0, -2.0});
  SolveOptions opts;
  CHECK_THROWS_AS(farsa::cg_direction(concave, 1.0, opts), farsa::NonPositiveCurvature);
  ReducedSystem zero_grad = diag_system({0.0, 0.0}, {1.0, 1.0});
  CHECK_THROWS_AS(farsa::cg_direction(zero_grad, 1.0, opts), farsa::InvalidArgument);
}
