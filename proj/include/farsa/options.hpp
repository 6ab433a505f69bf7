#ifndef FARSA_OPTIONS_HPP_
#define FARSA_OPTIONS_HPP_

#include <cstdint>
#include <optional>

namespace farsa {

enum class AlphaUpdate { basic, adaptive };

struct SolveOptions {
  // Step-selection and line-search tunables.
  double phi = 1.0;      // fraction of chi a selected sub-block must carry
  double xi = 0.5;       // backtracking factor
  double eta = 1e-3;     // sufficient-decrease constant
  double zeta = 0.8;     // PG parameter decrease factor
  double p = 2.0;        // exponent in the small-group threshold
  double kappa1 = 0.1;   // candidate-set threshold
  double kappa2 = 1e-2;  // small-group threshold
  double theta = 0.785398163397448279;  // pi/4, kill-radius shrink angle
  double q = 1.0;        // inexactness exponent in the CG certificate
  double mu = 1.0;       // inexactness forcing constant in the CG certificate
  double delta = 1e-8;   // Hessian-model curvature clamp (logistic loss)

  // Termination.
  double tol_rel = 1e-6;
  std::int64_t max_iter = 100000;
  double max_seconds = 900.0;

  // Policies.
  AlphaUpdate alpha_update = AlphaUpdate::basic;
  bool kappa2_rescale = true;  // kappa2 * |G_i| / |Icg_bar| in the small test
  bool phi_switch = false;     // start phi = 0.8, switch to 1 on a small CG f-decrease

  // Mechanism limits and numerical knobs.
  int backtrack_cap = 100;
  int max_alpha_increases = 100;    // adaptive mode: increases allowed before capping
  double cg_residual_floor = 1e-10;  // absolute floor in the CG residual target
  double cg_target_exponent = 1.5;   // r0^exponent term of the CG residual target

  // Reproducibility and reporting.
  std::uint64_t seed = 1;
  std::optional<double> alpha0;  // overrides the estimated initial PG parameter
  bool record_iterates = false;  // keep the full x history in the report
};

}  // namespace farsa

#endif  // FARSA_OPTIONS_HPP_
