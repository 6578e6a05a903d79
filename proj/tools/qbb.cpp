// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: solve a model file, generate instances, run the
// strategy benchmark matrix, and format reports from a record log.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbb/bench.hpp"
#include "qbb/engine.hpp"
#include "qbb/instances.hpp"
#include "qbb/oracles.hpp"
#include "qbb/qubo.hpp"

namespace {

using namespace qbb;

std::string bits_string(const Assignment& x) {
  std::string s(x.size(), '0');
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) s[i] = '1';
  }
  return s;
}

const char* status_label(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::NodeLimit: return "node_limit";
  }
  return "unknown";
}

struct SolveArgs {
  std::string file;
  std::string branching = "degree";
  std::string node_selection = "best-bound";
  double time_limit = 0.0;  // 0 = unlimited
  std::int64_t node_limit = 0;
  std::string oracle_spec;
  int top_k = 10;
  bool callback_pool = false;
  int oracle_capacity = 0;
  int oracle_reads = 10;
  int oracle_budget = 100;
  double oracle_timeout = 60.0;
  std::uint64_t seed = 0;
};

int run_solve(const SolveArgs& a) {
  const QuboModel model = load_model(a.file);

  SolverConfig cfg;
  if (a.time_limit > 0.0) cfg.time_limit = a.time_limit;
  if (a.node_limit > 0) cfg.node_limit = a.node_limit;
  if (a.branching == "degree") cfg.branching = BranchRule::DegreePriority;
  else if (a.branching == "index") cfg.branching = BranchRule::IndexOrder;
  else throw std::invalid_argument("unknown branching: " + a.branching);
  if (a.node_selection == "best-bound") cfg.node_selection = NodeSelection::BestBound;
  else if (a.node_selection == "dfs") cfg.node_selection = NodeSelection::DepthFirst;
  else if (a.node_selection == "bfs") cfg.node_selection = NodeSelection::BreadthFirst;
  else throw std::invalid_argument("unknown node selection: " + a.node_selection);

  bool injected = false;
  if (!a.oracle_spec.empty()) {
    OracleConfig oracle = parse_oracle_spec(a.oracle_spec);
    oracle.seed = a.seed;
    oracle.num_reads = a.oracle_reads;
    oracle.budget = a.oracle_budget;
    oracle.timeout_s = a.oracle_timeout;
    if (a.oracle_capacity > 0) oracle.capacity = a.oracle_capacity;
    const SolutionPool pool = run_oracle(model, oracle);
    if (a.callback_pool) {
      cfg.callback_pool = pool;
    } else {
      cfg.mip_start = top_k(pool, static_cast<std::size_t>(std::max(a.top_k, 1)));
    }
    injected = true;
  } else if (a.callback_pool) {
    throw std::invalid_argument("--callback-pool needs --mip-start-oracle as pool source");
  }

  const SolveResult res = solve(model, cfg);

  std::printf("status: %s\n", status_label(res.status));
  if (res.best_assignment) {
    std::printf("best value: %.17g\n", res.best_value);
    std::printf("assignment: %s\n", bits_string(*res.best_assignment).c_str());
  } else {
    std::printf("best value: none\n");
  }
  std::printf("nodes explored: %lld\n", static_cast<long long>(res.nodes_explored));
  std::printf("wall time: %.3f s\n", res.wall_time);
  if (injected) {
    std::printf("pool offered/accepted: %lld/%lld\n",
                static_cast<long long>(res.injection.offered),
                static_cast<long long>(res.injection.accepted));
  }
  return 0;
}

struct XorsatArgs {
  int n = 16;
  int k = 3;
  int r = 3;
  std::uint64_t seed = 0;
  std::string out;
  std::string planted_out;
};

int run_gen_xorsat(const XorsatArgs& a) {
  const PlantedInstance inst = gen_xorsat(a.n, a.k, a.r, a.seed);
  save_model(inst.model, a.out);
  if (!a.planted_out.empty()) {
    std::ofstream out(a.planted_out);
    if (!out) throw std::runtime_error("cannot open " + a.planted_out);
    out << bits_string(inst.planted) << '\n';
    if (!out) throw std::runtime_error("write failed: " + a.planted_out);
  }
  std::printf("wrote %s: %d vars, %d terms (planted value %.17g)\n", a.out.c_str(),
              inst.model.num_vars(), static_cast<int>(inst.model.num_terms()),
              evaluate(inst.model, inst.planted));
  return 0;
}

struct RandomArgs {
  int n = 16;
  double density = 0.5;
  int coef_range = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen_random(const RandomArgs& a) {
  const QuboModel model = gen_random(a.n, a.density, a.coef_range, a.seed);
  save_model(model, a.out);
  std::printf("wrote %s: %d vars, %d terms\n", a.out.c_str(), model.num_vars(),
              static_cast<int>(model.num_terms()));
  return 0;
}

struct BenchArgs {
  std::string instances_dir;
  std::string matrix_file;
  double time_limit = 30.0;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::int64_t node_limit = 0;
  std::string out = "records.log";
};

int run_bench(const BenchArgs& a) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(a.instances_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (!name.empty() && name[0] != '.') files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::runtime_error("no instance files in " + a.instances_dir);
  }

  std::vector<NamedInstance> instances;
  instances.reserve(files.size());
  for (const auto& path : files) {
    instances.emplace_back(path.filename().string(), load_model(path));
  }

  const std::vector<StrategySpec> strategies = load_strategy_matrix(a.matrix_file);

  BenchOptions opt;
  opt.time_limit = a.time_limit;
  opt.jobs = a.jobs;
  opt.seed = a.seed;
  if (a.node_limit > 0) opt.node_limit = a.node_limit;

  const std::vector<RunRecord> records = run_matrix(instances, strategies, opt, a.out);
  std::printf("%d records in %s (%d instances x %d strategies)\n",
              static_cast<int>(records.size()), a.out.c_str(),
              static_cast<int>(instances.size()), static_cast<int>(strategies.size()));
  return 0;
}

struct ReportArgs {
  std::string log_file;
  std::string baseline;
  std::string format = "text";
  double filter_threshold = 0.0;  // 0 = no filtering
};

int run_report(const ReportArgs& a) {
  std::vector<RunRecord> records = load_records(a.log_file);
  if (a.filter_threshold > 0.0) {
    const std::set<std::string> keep =
        filter_instances(records, a.baseline, a.filter_threshold);
    std::erase_if(records,
                  [&](const RunRecord& r) { return keep.count(r.instance_id) == 0; });
    if (records.empty()) {
      throw std::runtime_error("no instances pass the filter threshold");
    }
  }
  ReportFormat format = ReportFormat::Text;
  if (a.format == "md" || a.format == "markdown") format = ReportFormat::Markdown;
  else if (a.format == "csv") format = ReportFormat::Csv;
  else if (a.format != "text") throw std::invalid_argument("unknown format: " + a.format);
  std::fputs(report(records, a.baseline, format).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact branch-and-bound solver for quadratic binary programs"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve a model file exactly");
  solve_cmd->add_option("file", solve_args.file, "Model in sparse triplet format")
      ->required();
  solve_cmd->add_option("--branching", solve_args.branching, "degree|index");
  solve_cmd->add_option("--node-selection", solve_args.node_selection,
                        "best-bound|dfs|bfs");
  solve_cmd->add_option("--time-limit", solve_args.time_limit, "Seconds, 0 = unlimited");
  solve_cmd->add_option("--node-limit", solve_args.node_limit, "Nodes, 0 = unlimited");
  solve_cmd->add_option("--mip-start-oracle", solve_args.oracle_spec,
                        "sa|tabu|greedy|external:<cmd>");
  solve_cmd->add_option("--top-k", solve_args.top_k, "Pool entries used as MIP start");
  solve_cmd->add_flag("--callback-pool", solve_args.callback_pool,
                      "Inject the oracle pool at tree nodes instead of the root");
  solve_cmd->add_option("--oracle-capacity", solve_args.oracle_capacity,
                        "Max variables the oracle accepts, 0 = unlimited");
  solve_cmd->add_option("--oracle-reads", solve_args.oracle_reads, "Oracle restarts");
  solve_cmd->add_option("--oracle-budget", solve_args.oracle_budget,
                        "Oracle sweeps/iterations per read");
  solve_cmd->add_option("--oracle-timeout", solve_args.oracle_timeout,
                        "External oracle wall clock cap in seconds");
  solve_cmd->add_option("--seed", solve_args.seed, "Oracle seed");

  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate instances");
  gen_cmd->require_subcommand(1);

  XorsatArgs xorsat_args;
  CLI::App* xorsat_cmd =
      gen_cmd->add_subcommand("xorsat", "Planted parity instance with known optimum 0");
  xorsat_cmd->add_option("--n", xorsat_args.n, "Core variables")->required();
  xorsat_cmd->add_option("--k", xorsat_args.k, "Clause width, 3 or 5");
  xorsat_cmd->add_option("--r", xorsat_args.r, "Clauses per variable");
  xorsat_cmd->add_option("--seed", xorsat_args.seed, "Generator seed");
  xorsat_cmd->add_option("-o,--output", xorsat_args.out, "Output model file")->required();
  xorsat_cmd->add_option("--planted-out", xorsat_args.planted_out,
                         "Also write the planted assignment bits");

  RandomArgs random_args;
  CLI::App* random_cmd =
      gen_cmd->add_subcommand("random", "Random integer-coefficient model");
  random_cmd->add_option("--n", random_args.n, "Variables")->required();
  random_cmd->add_option("--density", random_args.density, "Off-diagonal fill in (0,1]");
  random_cmd->add_option("--coef-range", random_args.coef_range,
                         "Coefficients drawn from [-R,R] minus zero");
  random_cmd->add_option("--seed", random_args.seed, "Generator seed");
  random_cmd->add_option("-o,--output", random_args.out, "Output model file")->required();

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run the strategy matrix");
  bench_cmd->add_option("--instances", bench_args.instances_dir, "Instance directory")
      ->required();
  bench_cmd->add_option("--matrix", bench_args.matrix_file, "Strategy matrix JSON file")
      ->required();
  bench_cmd->add_option("--time-limit", bench_args.time_limit, "Per-run seconds");
  bench_cmd->add_option("--jobs", bench_args.jobs, "Parallel instances");
  bench_cmd->add_option("--seed", bench_args.seed, "Oracle seed");
  bench_cmd->add_option("--node-limit", bench_args.node_limit,
                        "Per-run node cap, 0 = unlimited");
  bench_cmd->add_option("-o,--output", bench_args.out, "Record log (appended, resumable)");

  ReportArgs report_args;
  CLI::App* report_cmd = app.add_subcommand("report", "Aggregate a record log");
  report_cmd->add_option("log", report_args.log_file, "Record log file")->required();
  report_cmd->add_option("--baseline", report_args.baseline, "Baseline strategy name")
      ->required();
  report_cmd->add_option("--format", report_args.format, "text|md|csv");
  report_cmd->add_option("--filter-threshold", report_args.filter_threshold,
                         "Keep instances whose baseline run took longer than this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve_args);
    if (gen_cmd->parsed()) {
      if (xorsat_cmd->parsed()) return run_gen_xorsat(xorsat_args);
      if (random_cmd->parsed()) return run_gen_random(random_args);
    }
    if (bench_cmd->parsed()) return run_bench(bench_args);
    if (report_cmd->parsed()) return run_report(report_args);
    std::fputs("no subcommand\n", stderr);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
