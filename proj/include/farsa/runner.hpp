#ifndef FARSA_RUNNER_HPP_
#define FARSA_RUNNER_HPP_

#include <string>
#include <vector>

#include "farsa/io.hpp"
#include "farsa/options.hpp"
#include "farsa/solver.hpp"

// Library side of the command-line front end: single runs, the 8-instance
// experiment grid, report/trace emission and the timing comparison metric.

namespace farsa {

struct RunConfig {
  std::string data_path;
  bool scale = false;
  double fraction = 0.5;       // group count as a fraction of n
  double lambda_scale = 0.1;   // weight scale relative to lambda_min
  std::string solver = "farsa";  // "farsa" or "pg"
  std::string format = "json";   // report format: "json" or "csv"
  SolveOptions options;
  std::string out_report;  // empty: report to stdout
  std::string out_trace;   // empty: no trace file
};

struct RunResult {
  SolveReport report;
  double lambda_min_value = 0.0;
  int num_samples = 0;
  int num_features = 0;
  int num_groups = 0;
};

// Loads the dataset, builds the instance and runs the requested solver.
// Throws ParseError / InvalidArgument on bad inputs.
RunResult run_single(const RunConfig& cfg);

std::string report_to_json(const RunResult& result, const RunConfig& cfg);
std::string report_to_csv(const RunResult& result, const RunConfig& cfg);
std::string trace_to_csv(const SolveReport& report);

// One grid row: both solvers on the same instance plus the section-5.3 style
// comparison columns.
struct GridRow {
  std::string dataset;
  double fraction = 0.0;
  double lambda_scale = 0.0;
  SolveStatus farsa_status = SolveStatus::optimal;
  double farsa_seconds = 0.0;
  std::int64_t farsa_iterations = 0;
  double farsa_objective = 0.0;
  int farsa_zero_groups = 0;
  SolveStatus pg_status = SolveStatus::optimal;
  double pg_seconds = 0.0;
  std::int64_t pg_iterations = 0;
  double pg_objective = 0.0;
  int pg_zero_groups = 0;
  std::string objective_winner;  // "farsa" | "pg" | "tie" (|dF| <= 1e-8)
  std::string sparsity_winner;   // zero-group strict superset; "tie" | "none"
  double time_ratio = 0.0;       // -log2(t_farsa / t_pg), +-10 on failure
  bool ratio_valid = false;      // both solves finished optimal
  std::string error;             // nonempty when the instance itself failed
};

// Runs the 4 fractions x 2 lambda scales grid on every dataset, both solvers
// per instance, at most `jobs` instances in flight. Per-instance failures are
// recorded in the row and the grid continues.
std::vector<GridRow> run_grid(const std::vector<std::string>& dataset_paths, bool scale,
                              const SolveOptions& base_options, int jobs);

std::string grid_to_csv(const std::vector<GridRow>& rows);

// -log2(time_a / time_b); a failed side pushes the value to the -+10 cap
// (0 when both failed). Nonpositive times are rejected.
double compare_metric(double time_a, double time_b, bool fail_a = false,
                      bool fail_b = false);

}  // namespace farsa

#endif  // FARSA_RUNNER_HPP_
