// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qbb/engine.hpp"
#include "qbb/oracles.hpp"
#include "qbb/qubo.hpp"

namespace qbb {

enum class RunStatus { Optimal, TimeLimit, NodeLimit, Failed };

struct RunRecord {
  std::string instance_id;
  std::string strategy;
  RunStatus status = RunStatus::Failed;
  double wall_time = 0.0;
  // Timeout semantics: min(wall_time, time_limit) when Optimal, exactly the
  // time limit otherwise, so truncated runs cannot look fast.
  double reported_time = 0.0;
  std::int64_t nodes_explored = 0;
  std::optional<double> best_value;
  std::uint64_t seed = 0;
};

enum class InjectionKind { None, MipStartTopK, PoolCallback, BestSolution };

struct StrategySpec {
  std::string name;
  BranchRule branching = BranchRule::IndexOrder;
  NodeSelection node_selection = NodeSelection::BestBound;
  InjectionKind injection = InjectionKind::None;
  OracleConfig oracle;  // used by MipStartTopK and PoolCallback
  int top_k = 10;       // MipStartTopK: entries passed as MIP start
};

struct BenchOptions {
  double time_limit = 30.0;  // desk-scale default
  int jobs = 1;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> node_limit;
};

// Shifted geometric mean in log space: exp(mean(log(v + shift))) - shift.
// Values must be nonnegative and nonempty; shift nonnegative.
double sgm(const std::vector<double>& values, double shift);

inline double sgm10(const std::vector<double>& values) { return sgm(values, 10.0); }

using NamedInstance = std::pair<std::string, QuboModel>;

// Oracle pools (and BestSolution reference solves) built once per instance
// and shared across the strategies that request identical configurations.
class PoolCache {
 public:
  const SolutionPool& pool_for(const QuboModel& model, const OracleConfig& cfg);
  const std::optional<Assignment>& reference_solution(const QuboModel& model,
                                                      const StrategySpec& strat,
                                                      const BenchOptions& opt);

 private:
  std::map<std::string, SolutionPool> pools_;
  std::map<std::string, std::optional<Assignment>> references_;
};

// Runs one strategy on one model (pools resolved through the cache);
// exposed so the CLI solve path and the matrix share the exact assembly.
SolveResult run_strategy(const QuboModel& model, const StrategySpec& strat,
                         const BenchOptions& opt, PoolCache& cache);

// Cross product of instances and strategies. Pairs already present in the
// append-only log are skipped on rerun; per-run failures become Failed
// records and the matrix continues. jobs > 1 parallelizes across instances.
// Returns all records (reused and fresh) in (instance, strategy) order.
std::vector<RunRecord> run_matrix(const std::vector<NamedInstance>& instances,
                                  const std::vector<StrategySpec>& strategies,
                                  const BenchOptions& opt,
                                  const std::filesystem::path& log_path);

// Instances whose baseline run exceeded the threshold and that at least one
// strategy solved to Optimal.
std::set<std::string> filter_instances(const std::vector<RunRecord>& records,
                                       const std::string& baseline_name,
                                       double threshold_s);

enum class ReportFormat { Text, Markdown, Csv };

// Per-strategy table: solved count, SGM10 of node counts and reported times,
// with signed one-decimal percentage deltas against the named baseline.
std::string report(const std::vector<RunRecord>& records,
                   const std::string& baseline_name, ReportFormat format);

// JSON-lines record log.
std::string record_to_json(const RunRecord& record);
RunRecord record_from_json(const std::string& line);
std::vector<RunRecord> load_records(const std::filesystem::path& path);

// Strategy matrix file: a JSON array of strategy objects (see README).
std::vector<StrategySpec> load_strategy_matrix(const std::filesystem::path& path);

// Oracle selector syntax shared by the CLI and the matrix file:
// "sa", "tabu", "greedy", or "external:<command line>".
OracleConfig parse_oracle_spec(const std::string& spec);

}  // namespace qbb
