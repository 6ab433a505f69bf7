#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "farsa/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitUsage = 2;

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

bool valid_fraction(double f) {
  return f == 0.25 || f == 0.5 || f == 0.75 || f == 1.0;
}

// Registers the solver tunables shared by `solve` and `grid`.
void add_solver_options(CLI::App* cmd, farsa::SolveOptions& opts) {
  cmd->add_option("--tol", opts.tol_rel, "Relative stationarity tolerance");
  cmd->add_option("--max-iter", opts.max_iter, "Iteration limit");
  cmd->add_option("--max-seconds", opts.max_seconds, "Time limit per solve (seconds)")
      ->envname("FARSA_MAX_SECONDS");
  cmd->add_option("--seed", opts.seed, "Seed for the alpha0 perturbation");
  cmd->add_option("--phi", opts.phi, "Block-selection fraction phi");
  cmd->add_option("--xi", opts.xi, "Backtracking factor xi");
  cmd->add_option("--eta", opts.eta, "Sufficient decrease constant eta");
  cmd->add_option("--zeta", opts.zeta, "PG parameter decrease factor zeta");
  cmd->add_option("--kappa1", opts.kappa1, "Candidate-set threshold kappa1");
  cmd->add_option("--kappa2", opts.kappa2, "Small-group threshold kappa2");
  cmd->add_option("--p", opts.p, "Small-group threshold exponent p");
  cmd->add_option("--theta", opts.theta, "Kill-radius angle theta");
  cmd->add_option("--q", opts.q, "CG certificate exponent q");
  cmd->add_option("--mu", opts.mu, "CG certificate forcing constant mu");
  cmd->add_option("--delta", opts.delta, "Hessian-model curvature clamp delta");
  std::map<std::string, farsa::AlphaUpdate> alpha_modes{
      {"basic", farsa::AlphaUpdate::basic}, {"adaptive", farsa::AlphaUpdate::adaptive}};
  cmd->add_option("--alpha-update", opts.alpha_update, "PG parameter update policy")
      ->transform(CLI::CheckedTransformer(alpha_modes, CLI::ignore_case));
  cmd->add_option("--alpha0", opts.alpha0, "Fixed initial PG parameter in (0,1]");
  cmd->add_flag("--kappa2-rescale,!--no-kappa2-rescale", opts.kappa2_rescale,
                "Group-size rescaling of kappa2 (default on)");
  cmd->add_flag("--phi-switch", opts.phi_switch,
                "Start phi = 0.8 and switch to 1 on a small CG objective decrease");
}

int do_solve(const farsa::RunConfig& cfg) {
  farsa::RunResult result = farsa::run_single(cfg);
  std::string report = cfg.format == "csv" ? farsa::report_to_csv(result, cfg)
                                           : farsa::report_to_json(result, cfg);
  if (cfg.out_report.empty()) {
    std::cout << report;
  } else if (!write_file(cfg.out_report, report)) {
    std::cerr << "error: cannot write " << cfg.out_report << "\n";
    return kExitUsage;
  }
  if (!cfg.out_trace.empty() &&
      !write_file(cfg.out_trace, farsa::trace_to_csv(result.report))) {
    std::cerr << "error: cannot write " << cfg.out_trace << "\n";
    return kExitUsage;
  }
  if (result.report.status != farsa::SolveStatus::optimal) {
    std::cerr << "solver finished with status " << farsa::to_string(result.report.status)
              << "\n";
    return kExitSolverFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FaRSA-Group: reduced-space solver for group-regularized logistic regression"};
  app.require_subcommand(1);

  farsa::RunConfig cfg;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve a single instance");
  solve_cmd->add_option("--data", cfg.data_path, "LIBSVM data file (.gz accepted)")
      ->required();
  solve_cmd->add_flag("--scale", cfg.scale, "Scale features to [-1, 1] per column");
  solve_cmd->add_option("--fraction", cfg.fraction,
                        "Group count fraction (0.25, 0.5, 0.75 or 1.0)");
  solve_cmd->add_option("--lambda-scale", cfg.lambda_scale,
                        "Weight scale relative to lambda_min");
  solve_cmd->add_option("--solver", cfg.solver, "Solver: farsa or pg")
      ->check(CLI::IsMember({"farsa", "pg"}));
  solve_cmd->add_option("--format", cfg.format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  solve_cmd->add_option("--out", cfg.out_report, "Report file (default: stdout)");
  solve_cmd->add_option("--trace", cfg.out_trace, "Per-iteration trace CSV file");
  add_solver_options(solve_cmd, cfg.options);

  std::vector<std::string> grid_paths;
  std::string grid_dir;
  std::string grid_out;
  bool grid_scale = false;
  int grid_jobs = 1;
  farsa::SolveOptions grid_options;
  CLI::App* grid_cmd = app.add_subcommand("grid", "Run the 8-instance grid per dataset");
  grid_cmd->add_option("--data", grid_paths, "LIBSVM data files");
  grid_cmd->add_option("--data-dir", grid_dir, "Directory of LIBSVM data files");
  grid_cmd->add_flag("--scale", grid_scale, "Scale features to [-1, 1] per column");
  grid_cmd->add_option("--jobs", grid_jobs, "Instances solved concurrently")
      ->check(CLI::PositiveNumber);
  grid_cmd->add_option("--out", grid_out, "Summary CSV file (default: stdout)");
  add_solver_options(grid_cmd, grid_options);

  double time_a = 0.0;
  double time_b = 0.0;
  bool fail_a = false;
  bool fail_b = false;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Timing metric -log2(time_a / time_b)");
  compare_cmd->add_option("--time-a", time_a, "Seconds of solver A");
  compare_cmd->add_option("--time-b", time_b, "Seconds of solver B");
  compare_cmd->add_flag("--fail-a", fail_a, "Solver A failed");
  compare_cmd->add_flag("--fail-b", fail_b, "Solver B failed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) {
      if (!valid_fraction(cfg.fraction)) {
        std::cerr << "error: --fraction must be 0.25, 0.5, 0.75 or 1.0\n";
        return kExitUsage;
      }
      return do_solve(cfg);
    }
    if (grid_cmd->parsed()) {
      if (!grid_dir.empty()) {
        std::vector<std::string> found;
        for (const auto& entry : std::filesystem::directory_iterator(grid_dir)) {
          if (entry.is_regular_file()) found.push_back(entry.path().string());
        }
        std::sort(found.begin(), found.end());
        grid_paths.insert(grid_paths.end(), found.begin(), found.end());
      }
      std::vector<farsa::GridRow> rows =
          farsa::run_grid(grid_paths, grid_scale, grid_options, grid_jobs);
      std::string csv = farsa::grid_to_csv(rows);
      if (grid_out.empty()) {
        std::cout << csv;
      } else if (!write_file(grid_out, csv)) {
        std::cerr << "error: cannot write " << grid_out << "\n";
        return kExitUsage;
      }
      for (const farsa::GridRow& row : rows) {
        if (!row.error.empty()) {
          std::cerr << row.dataset << ": " << row.error << "\n";
          return kExitSolverFailure;
        }
      }
      return kExitOk;
    }
    // compare
    double value = farsa::compare_metric(time_a, time_b, fail_a, fail_b);
    std::printf("%.17g\n", value);
    return kExitOk;
  } catch (const farsa::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const farsa::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const farsa::NonPositiveCurvature& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
