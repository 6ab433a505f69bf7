#include "farsa/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace farsa {

namespace {

// %.17g keeps the full double precision in text form.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::vector<double> kGridFractions = {0.25, 0.5, 0.75, 1.0};
const std::vector<double> kGridScales = {0.1, 0.01};

std::set<int> zero_group_set(const GroupPartition& part, const DenseVector& x) {
  std::set<int> zeros;
  for (int i = 0; i < part.num_groups(); ++i) {
    bool all_zero = true;
    for (int j : part.groups[i]) {
      if (x[j] != 0.0) {
        all_zero = false;
        break;
      }
    }
    if (all_zero) zeros.insert(i);
  }
  return zeros;
}

}  // namespace

RunResult run_single(const RunConfig& cfg) {
  if (cfg.solver != "farsa" && cfg.solver != "pg") {
    throw InvalidArgument("run_single: solver must be 'farsa' or 'pg'");
  }
  Dataset data = parse_libsvm(cfg.data_path);
  if (cfg.scale) scale_features(data);
  ProblemInstance inst = build_instance(data, cfg.fraction, cfg.lambda_scale);

  RunResult result;
  result.lambda_min_value = inst.lambda_min_value;
  result.num_samples = data.features.rows;
  result.num_features = data.features.cols;
  result.num_groups = inst.objective.partition.num_groups();

  DenseVector x0(inst.objective.dim(), 0.0);
  result.report = cfg.solver == "pg"
                      ? solve_baseline_pg(inst.objective, std::move(x0), cfg.options)
                      : solve(inst.objective, std::move(x0), cfg.options);
  return result;
}

std::string report_to_json(const RunResult& result, const RunConfig& cfg) {
  using json = nlohmann::ordered_json;
  const SolveReport& rep = result.report;
  json j;
  j["solver"] = cfg.solver;
  j["data"] = cfg.data_path;
  j["scale"] = cfg.scale;
  j["fraction"] = cfg.fraction;
  j["lambda_scale"] = cfg.lambda_scale;
  j["lambda_min"] = result.lambda_min_value;
  j["num_samples"] = result.num_samples;
  j["num_features"] = result.num_features;
  j["num_groups"] = result.num_groups;
  j["status"] = to_string(rep.status);
  j["iterations"] = rep.iterations;
  j["seconds"] = rep.seconds;
  j["alpha0"] = rep.alpha0;
  j["final_objective"] = rep.final_objective;
  j["chi_final"] = rep.chi_final;
  j["chi_cg0"] = rep.chi_cg0;
  j["chi_pg0"] = rep.chi_pg0;
  j["counters"] = {{"cg_new_zero", rep.count_cg_zero},
                   {"cg_suff_descent", rep.count_cg_descent},
                   {"pg_same_alpha", rep.count_pg_same},
                   {"pg_decrease_alpha", rep.count_pg_decrease}};
  j["seed"] = cfg.options.seed;
  j["tol_rel"] = cfg.options.tol_rel;
  j["max_iter"] = cfg.options.max_iter;
  j["max_seconds"] = cfg.options.max_seconds;
  j["x_final"] = rep.x_final;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const RunResult& result, const RunConfig& cfg) {
  const SolveReport& rep = result.report;
  std::ostringstream out;
  out << "solver,data,fraction,lambda_scale,status,iterations,seconds,final_objective,"
         "zero_groups\n";
  int zeros = 0;
  {
    // count through the same grouping used by the solve
    std::vector<std::vector<int>> groups =
        assign_groups(result.num_features, result.num_groups);
    for (const std::vector<int>& g : groups) {
      bool all_zero = true;
      for (int j : g) {
        if (rep.x_final[j] != 0.0) all_zero = false;
      }
      if (all_zero) ++zeros;
    }
  }
  out << cfg.solver << ',' << cfg.data_path << ',' << fmt(cfg.fraction) << ','
      << fmt(cfg.lambda_scale) << ',' << to_string(rep.status) << ',' << rep.iterations
      << ',' << fmt(rep.seconds) << ',' << fmt(rep.final_objective) << ',' << zeros << '\n';
  return out.str();
}

std::string trace_to_csv(const SolveReport& report) {
  std::ostringstream out;
  out << "iter,type,flag,chi_cg,chi_pg,alpha,objective,zero_groups,cg_iters,backtracks\n";
  for (const TraceRecord& r : report.trace) {
    out << r.iter << ',' << to_string(r.type) << ',' << to_string(r.flag) << ','
        << fmt(r.chi_cg) << ',' << fmt(r.chi_pg) << ',' << fmt(r.alpha) << ','
        << fmt(r.objective) << ',' << r.zero_groups << ',' << r.cg_iters << ','
        << r.backtracks << '\n';
  }
  return out.str();
}

double compare_metric(double time_a, double time_b, bool fail_a, bool fail_b) {
  if (fail_a && fail_b) return 0.0;
  if (fail_a) return -10.0;
  if (fail_b) return 10.0;
  if (!(time_a > 0.0) || !(time_b > 0.0)) {
    throw InvalidArgument("compare_metric: times must be positive");
  }
  return -std::log2(time_a / time_b);
}

std::vector<GridRow> run_grid(const std::vector<std::string>& dataset_paths, bool scale,
                              const SolveOptions& base_options, int jobs) {
  struct Job {
    std::string path;
    double fraction;
    double lambda_scale;
  };
  std::vector<Job> jobs_list;
  for (const std::string& path : dataset_paths) {
    for (double fr : kGridFractions) {
      for (double ls : kGridScales) jobs_list.push_back({path, fr, ls});
    }
  }
  std::vector<GridRow> rows(jobs_list.size());
  std::atomic<std::size_t> next{0};
  std::mutex io_mutex;

  auto worker = [&]() {
    while (true) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= jobs_list.size()) return;
      const Job& job = jobs_list[idx];
      GridRow& row = rows[idx];
      row.dataset = job.path;
      row.fraction = job.fraction;
      row.lambda_scale = job.lambda_scale;
      try {
        Dataset data;
        {
          // parse once per job; serialized so error messages do not interleave
          std::lock_guard<std::mutex> lock(io_mutex);
          data = parse_libsvm(job.path);
        }
        if (scale) scale_features(data);
        // inner kernels stay serial when instances already run in parallel
        ProblemInstance inst =
            build_instance(data, job.fraction, job.lambda_scale, /*parallel=*/jobs <= 1);
        DenseVector x0(inst.objective.dim(), 0.0);
        SolveReport fa = solve(inst.objective, x0, base_options);
        SolveReport pg = solve_baseline_pg(inst.objective, x0, base_options);

        row.farsa_status = fa.status;
        row.farsa_seconds = fa.seconds;
        row.farsa_iterations = fa.iterations;
        row.farsa_objective = fa.final_objective;
        row.pg_status = pg.status;
        row.pg_seconds = pg.seconds;
        row.pg_iterations = pg.iterations;
        row.pg_objective = pg.final_objective;

        const GroupPartition& part = inst.objective.partition;
        std::set<int> zf = zero_group_set(part, fa.x_final);
        std::set<int> zp = zero_group_set(part, pg.x_final);
        row.farsa_zero_groups = static_cast<int>(zf.size());
        row.pg_zero_groups = static_cast<int>(zp.size());

        if (std::fabs(fa.final_objective - pg.final_objective) <= 1e-8) {
          row.objective_winner = "tie";
        } else {
          row.objective_winner = fa.final_objective < pg.final_objective ? "farsa" : "pg";
        }
        if (zf == zp) {
          row.sparsity_winner = "tie";
        } else if (std::includes(zf.begin(), zf.end(), zp.begin(), zp.end())) {
          row.sparsity_winner = "farsa";
        } else if (std::includes(zp.begin(), zp.end(), zf.begin(), zf.end())) {
          row.sparsity_winner = "pg";
        } else {
          row.sparsity_winner = "none";
        }
        bool fail_f = fa.status != SolveStatus::optimal;
        bool fail_p = pg.status != SolveStatus::optimal;
        double tf = std::max(fa.seconds, 1e-9);  // clock quantum guard
        double tp = std::max(pg.seconds, 1e-9);
        row.time_ratio = compare_metric(tf, tp, fail_f, fail_p);
        row.ratio_valid = !fail_f && !fail_p;
      } catch (const std::exception& err) {
        row.error = err.what();
        // keep the CSV one-token-per-column
        std::replace(row.error.begin(), row.error.end(), ',', ';');
      }
    }
  };

  int nthreads = std::max(1, jobs);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return rows;
}

std::string grid_to_csv(const std::vector<GridRow>& rows) {
  std::ostringstream out;
  out << "dataset,fraction,lambda_scale,"
         "farsa_status,farsa_seconds,farsa_iterations,farsa_objective,farsa_zero_groups,"
         "pg_status,pg_seconds,pg_iterations,pg_objective,pg_zero_groups,"
         "objective_winner,sparsity_winner,time_ratio,ratio_valid,error\n";
  for (const GridRow& r : rows) {
    out << r.dataset << ',' << fmt(r.fraction) << ',' << fmt(r.lambda_scale) << ','
        << to_string(r.farsa_status) << ',' << fmt(r.farsa_seconds) << ','
        << r.farsa_iterations << ',' << fmt(r.farsa_objective) << ',' << r.farsa_zero_groups
        << ',' << to_string(r.pg_status) << ',' << fmt(r.pg_seconds) << ','
        << r.pg_iterations << ',' << fmt(r.pg_objective) << ',' << r.pg_zero_groups << ','
        << r.objective_winner << ',' << r.sparsity_winner << ',' << fmt(r.time_ratio) << ','
        << (r.ratio_valid ? 1 : 0) << ',' << r.error << '\n';
  }
  return out.str();
}

}  // namespace farsa
