// SPDX-License-Identifier: Apache-2.0
#include "qbb/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qbb/instances.hpp"

namespace qbb {

namespace {

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Optimal: return "optimal";
    case RunStatus::TimeLimit: return "time_limit";
    case RunStatus::NodeLimit: return "node_limit";
    case RunStatus::Failed: return "failed";
  }
  return "failed";
}

RunStatus status_from_name(const std::string& name) {
  if (name == "optimal") return RunStatus::Optimal;
  if (name == "time_limit") return RunStatus::TimeLimit;
  if (name == "node_limit") return RunStatus::NodeLimit;
  if (name == "failed") return RunStatus::Failed;
  throw ParseError("unknown run status: " + name);
}

std::string oracle_cache_key(const OracleConfig& cfg) {
  std::ostringstream key;
  key << static_cast<int>(cfg.kind) << '|' << cfg.seed << '|' << cfg.budget << '|'
      << cfg.num_reads << '|' << (cfg.capacity ? *cfg.capacity : -1) << '|'
      << cfg.timeout_s << '|' << cfg.external_cmd;
  return key.str();
}

std::string strategy_cache_key(const StrategySpec& strat) {
  std::ostringstream key;
  key << static_cast<int>(strat.branching) << '|'
      << static_cast<int>(strat.node_selection);
  return key.str();
}

RunStatus map_status(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return RunStatus::Optimal;
    case SolveStatus::TimeLimit: return RunStatus::TimeLimit;
    case SolveStatus::NodeLimit: return RunStatus::NodeLimit;
  }
  return RunStatus::Failed;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string format_delta(double value, double base) {
  if (!(base > 0.0)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%+.1f%%", (value - base) / base * 100.0);
  return buf;
}

struct StrategyAggregate {
  std::string name;
  int solved = 0;
  int runs = 0;
  std::vector<double> nodes;
  std::vector<double> times;
};

}  // namespace

double sgm(const std::vector<double>& values, double shift) {
  if (values.empty()) throw std::invalid_argument("sgm: empty value list");
  if (shift < 0.0) throw std::invalid_argument("sgm: shift must be nonnegative");
  double log_sum = 0.0;
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("sgm: negative value");
    log_sum += std::log(v + shift);
  }
  return std::exp(log_sum / static_cast<double>(values.size())) - shift;
}

const SolutionPool& PoolCache::pool_for(const QuboModel& model, const OracleConfig& cfg) {
  const std::string key = oracle_cache_key(cfg);
  auto it = pools_.find(key);
  if (it == pools_.end()) {
    it = pools_.emplace(key, run_oracle(model, cfg)).first;
  }
  return it->second;
}

const std::optional<Assignment>& PoolCache::reference_solution(const QuboModel& model,
                                                               const StrategySpec& strat,
                                                               const BenchOptions& opt) {
  const std::string key = strategy_cache_key(strat);
  auto it = references_.find(key);
  if (it == references_.end()) {
    SolverConfig cfg;
    cfg.time_limit = opt.time_limit;
    cfg.node_limit = opt.node_limit;
    cfg.branching = strat.branching;
    cfg.node_selection = strat.node_selection;
    const SolveResult res = solve(model, cfg);
    it = references_.emplace(key, res.best_assignment).first;
  }
  return it->second;
}

SolveResult run_strategy(const QuboModel& model, const StrategySpec& strat,
                         const BenchOptions& opt, PoolCache& cache) {
  SolverConfig cfg;
  cfg.time_limit = opt.time_limit;
  cfg.node_limit = opt.node_limit;
  cfg.branching = strat.branching;
  cfg.node_selection = strat.node_selection;

  OracleConfig oracle = strat.oracle;
  oracle.seed = opt.seed;

  switch (strat.injection) {
    case InjectionKind::None:
      break;
    case InjectionKind::MipStartTopK:
      cfg.mip_start = top_k(cache.pool_for(model, oracle),
                            static_cast<std::size_t>(std::max(strat.top_k, 0)));
      break;
    case InjectionKind::PoolCallback:
      cfg.callback_pool = cache.pool_for(model, oracle);
      break;
    case InjectionKind::BestSolution: {
      // Upper bound of the improvement: inject the best known solution,
      // obtained from an unmeasured reference solve of the same instance.
      const auto& ref = cache.reference_solution(model, strat, opt);
      if (ref) {
        SolutionPool pool;
        pool.insert(*ref, evaluate(model, *ref));
        cfg.mip_start = std::move(pool);
      }
      break;
    }
  }
  return solve(model, cfg);
}

std::vector<RunRecord> run_matrix(const std::vector<NamedInstance>& instances,
                                  const std::vector<StrategySpec>& strategies,
                                  const BenchOptions& opt,
                                  const std::filesystem::path& log_path) {
  if (opt.jobs < 1) throw std::invalid_argument("run_matrix: jobs must be positive");
  for (const StrategySpec& s : strategies) {
    if (s.name.empty()) throw std::invalid_argument("run_matrix: unnamed strategy");
  }

  // Resume: (instance, strategy) pairs already logged are not rerun.
  std::map<std::pair<std::string, std::string>, RunRecord> done;
  if (std::filesystem::exists(log_path)) {
    for (RunRecord& r : load_records(log_path)) {
      auto key = std::make_pair(r.instance_id, r.strategy);
      done.emplace(std::move(key), std::move(r));
    }
  }

  std::ofstream log(log_path, std::ios::app);
  if (!log) throw std::runtime_error("run_matrix: cannot open log " + log_path.string());

  std::vector<std::vector<std::optional<RunRecord>>> grid(
      instances.size(), std::vector<std::optional<RunRecord>>(strategies.size()));

  std::mutex log_mutex;
  std::atomic<std::size_t> next_instance{0};

  const auto worker = [&] {
    for (;;) {
      const std::size_t idx = next_instance.fetch_add(1);
      if (idx >= instances.size()) return;
      const auto& [instance_id, model] = instances[idx];
      PoolCache cache;  // pools are built once per instance, then shared
      for (std::size_t s = 0; s < strategies.size(); ++s) {
        const StrategySpec& strat = strategies[s];
        if (auto it = done.find({instance_id, strat.name}); it != done.end()) {
          grid[idx][s] = it->second;
          continue;
        }
        RunRecord rec;
        rec.instance_id = instance_id;
        rec.strategy = strat.name;
        rec.seed = opt.seed;
        rec.reported_time = opt.time_limit;
        try {
          const SolveResult res = run_strategy(model, strat, opt, cache);
          rec.status = map_status(res.status);
          rec.wall_time = res.wall_time;
          rec.reported_time = rec.status == RunStatus::Optimal
                                  ? std::min(res.wall_time, opt.time_limit)
                                  : opt.time_limit;
          rec.nodes_explored = res.nodes_explored;
          if (res.best_assignment) rec.best_value = res.best_value;
        } catch (const std::exception& e) {
          rec.status = RunStatus::Failed;
          std::lock_guard<std::mutex> lock(log_mutex);
          std::cerr << "run failed: " << instance_id << " / " << strat.name << ": "
                    << e.what() << '\n';
        }
        {
          std::lock_guard<std::mutex> lock(log_mutex);
          log << record_to_json(rec) << '\n';
          log.flush();
        }
        grid[idx][s] = std::move(rec);
      }
    }
  };

  if (opt.jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    const int count = std::min<int>(opt.jobs, static_cast<int>(instances.size()));
    threads.reserve(static_cast<std::size_t>(std::max(count, 1)));
    for (int t = 0; t < count; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  std::vector<RunRecord> records;
  records.reserve(instances.size() * strategies.size());
  for (auto& row : grid) {
    for (auto& cell : row) {
      if (cell) records.push_back(std::move(*cell));
    }
  }
  return records;
}

std::set<std::string> filter_instances(const std::vector<RunRecord>& records,
                                       const std::string& baseline_name,
                                       double threshold_s) {
  std::set<std::string> slow;
  std::set<std::string> solved_by_any;
  for (const RunRecord& r : records) {
    if (r.strategy == baseline_name && r.reported_time > threshold_s) {
      slow.insert(r.instance_id);
    }
    if (r.status == RunStatus::Optimal) solved_by_any.insert(r.instance_id);
  }
  std::set<std::string> out;
  for (const std::string& id : slow) {
    if (solved_by_any.count(id)) out.insert(id);
  }
  return out;
}

std::string report(const std::vector<RunRecord>& records,
                   const std::string& baseline_name, ReportFormat format) {
  std::vector<StrategyAggregate> rows;
  std::map<std::string, std::size_t> index;
  for (const RunRecord& r : records) {
    auto [it, fresh] = index.emplace(r.strategy, rows.size());
    if (fresh) rows.push_back({r.strategy, 0, 0, {}, {}});
    StrategyAggregate& agg = rows[it->second];
    ++agg.runs;
    if (r.status == RunStatus::Optimal) ++agg.solved;
    agg.nodes.push_back(static_cast<double>(r.nodes_explored));
    agg.times.push_back(r.reported_time);
  }
  if (rows.empty()) throw std::invalid_argument("report: no records");
  if (!index.count(baseline_name)) {
    throw std::invalid_argument("report: unknown baseline strategy " + baseline_name);
  }

  const StrategyAggregate& base = rows[index[baseline_name]];
  const double base_nodes = sgm10(base.nodes);
  const double base_time = sgm10(base.times);

  struct Line {
    std::string name, solved, nodes, time;
  };
  std::vector<Line> lines;
  for (const StrategyAggregate& agg : rows) {
    Line ln;
    ln.name = agg.name;
    ln.solved = std::to_string(agg.solved) + "/" + std::to_string(agg.runs);
    const double nodes_sgm = sgm10(agg.nodes);
    const double time_sgm = sgm10(agg.times);
    ln.nodes = format_fixed(nodes_sgm, 1);
    ln.time = format_fixed(time_sgm, 1);
    if (agg.name != baseline_name) {
      const std::string nd = format_delta(nodes_sgm, base_nodes);
      const std::string td = format_delta(time_sgm, base_time);
      if (!nd.empty()) ln.nodes += " (" + nd + ")";
      if (!td.empty()) ln.time += " (" + td + ")";
    }
    lines.push_back(std::move(ln));
  }

  std::ostringstream out;
  const char* footer =
      "SGM10 over reported times; node counts of runs that hit a limit are "
      "included as recorded.";
  if (format == ReportFormat::Csv) {
    out << "strategy,solved,runs,sgm_nodes,nodes_delta,sgm_time,time_delta\n";
    for (const StrategyAggregate& agg : rows) {
      const double nodes_sgm = sgm10(agg.nodes);
      const double time_sgm = sgm10(agg.times);
      out << agg.name << ',' << agg.solved << ',' << agg.runs << ','
          << format_fixed(nodes_sgm, 1) << ',';
      if (agg.name != baseline_name) out << format_delta(nodes_sgm, base_nodes);
      out << ',' << format_fixed(time_sgm, 1) << ',';
      if (agg.name != baseline_name) out << format_delta(time_sgm, base_time);
      out << '\n';
    }
    return out.str();
  }

  std::size_t w_name = 8, w_solved = 6, w_nodes = 10, w_time = 11;
  for (const Line& ln : lines) {
    w_name = std::max(w_name, ln.name.size());
    w_solved = std::max(w_solved, ln.solved.size());
    w_nodes = std::max(w_nodes, ln.nodes.size());
    w_time = std::max(w_time, ln.time.size());
  }
  const auto pad = [](const std::string& s, std::size_t w) {
    return s + std::string(w - s.size(), ' ');
  };
  if (format == ReportFormat::Markdown) {
    out << "| " << pad("Strategy", w_name) << " | " << pad("Solved", w_solved) << " | "
        << pad("Node Count", w_nodes) << " | " << pad("Runtime [s]", w_time) << " |\n";
    out << "|" << std::string(w_name + 2, '-') << "|" << std::string(w_solved + 2, '-')
        << "|" << std::string(w_nodes + 2, '-') << "|" << std::string(w_time + 2, '-')
        << "|\n";
    for (const Line& ln : lines) {
      out << "| " << pad(ln.name, w_name) << " | " << pad(ln.solved, w_solved) << " | "
          << pad(ln.nodes, w_nodes) << " | " << pad(ln.time, w_time) << " |\n";
    }
    out << '\n' << footer << '\n';
  } else {
    out << pad("Strategy", w_name + 2) << pad("Solved", w_solved + 2)
        << pad("Node Count", w_nodes + 2) << "Runtime [s]\n";
    for (const Line& ln : lines) {
      out << pad(ln.name, w_name + 2) << pad(ln.solved, w_solved + 2)
          << pad(ln.nodes, w_nodes + 2) << ln.time << '\n';
    }
    out << '\n' << footer << '\n';
  }
  return out.str();
}

std::string record_to_json(const RunRecord& record) {
  nlohmann::json j;
  j["instance"] = record.instance_id;
  j["strategy"] = record.strategy;
  j["status"] = status_name(record.status);
  j["wall_time"] = record.wall_time;
  j["reported_time"] = record.reported_time;
  j["nodes"] = record.nodes_explored;
  if (record.best_value) j["best_value"] = *record.best_value;
  else j["best_value"] = nullptr;
  j["seed"] = record.seed;
  return j.dump();
}

RunRecord record_from_json(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad record line: ") + e.what());
  }
  try {
    RunRecord r;
    r.instance_id = j.at("instance").get<std::string>();
    r.strategy = j.at("strategy").get<std::string>();
    r.status = status_from_name(j.at("status").get<std::string>());
    r.wall_time = j.at("wall_time").get<double>();
    r.reported_time = j.at("reported_time").get<double>();
    r.nodes_explored = j.at("nodes").get<std::int64_t>();
    if (!j.at("best_value").is_null()) r.best_value = j.at("best_value").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad record line: ") + e.what());
  }
}

std::vector<RunRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_records: cannot open " + path.string());
  std::vector<RunRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json(line));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

OracleConfig parse_oracle_spec(const std::string& spec) {
  OracleConfig cfg;
  if (spec == "sa") {
    cfg.kind = OracleKind::SimulatedAnnealing;
  } else if (spec == "tabu") {
    cfg.kind = OracleKind::TabuSearch;
  } else if (spec == "greedy") {
    cfg.kind = OracleKind::Greedy;
  } else if (spec.rfind("external:", 0) == 0 && spec.size() > 9) {
    cfg.kind = OracleKind::External;
    cfg.external_cmd = spec.substr(9);
  } else {
    throw std::invalid_argument("unknown oracle: " + spec +
                                " (expected sa, tabu, greedy, or external:<cmd>)");
  }
  return cfg;
}

std::vector<StrategySpec> load_strategy_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open strategy matrix " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!j.is_array() || j.empty()) {
    throw ParseError(path.string() + ": expected a nonempty array of strategies");
  }
  std::vector<StrategySpec> out;
  std::set<std::string> names;
  for (const auto& obj : j) {
    if (!obj.is_object() || !obj.contains("name")) {
      throw ParseError(path.string() + ": each strategy needs a name");
    }
    StrategySpec s;
    s.name = obj.at("name").get<std::string>();
    if (!names.insert(s.name).second) {
      throw ParseError(path.string() + ": duplicate strategy name " + s.name);
    }
    if (obj.contains("branching")) {
      const std::string b = obj.at("branching").get<std::string>();
      if (b == "degree") s.branching = BranchRule::DegreePriority;
      else if (b == "index") s.branching = BranchRule::IndexOrder;
      else throw ParseError(path.string() + ": unknown branching " + b);
    }
    if (obj.contains("node_selection")) {
      const std::string ns = obj.at("node_selection").get<std::string>();
      if (ns == "best-bound") s.node_selection = NodeSelection::BestBound;
      else if (ns == "dfs") s.node_selection = NodeSelection::DepthFirst;
      else if (ns == "bfs") s.node_selection = NodeSelection::BreadthFirst;
      else throw ParseError(path.string() + ": unknown node_selection " + ns);
    }
    if (obj.contains("injection")) {
      const std::string inj = obj.at("injection").get<std::string>();
      if (inj == "none") s.injection = InjectionKind::None;
      else if (inj == "mip-start") s.injection = InjectionKind::MipStartTopK;
      else if (inj == "callback") s.injection = InjectionKind::PoolCallback;
      else if (inj == "best-solution") s.injection = InjectionKind::BestSolution;
      else throw ParseError(path.string() + ": unknown injection " + inj);
    }
    if (s.injection == InjectionKind::MipStartTopK ||
        s.injection == InjectionKind::PoolCallback) {
      if (!obj.contains("oracle")) {
        throw ParseError(path.string() + ": strategy " + s.name + " needs an oracle");
      }
      try {
        const OracleConfig parsed = parse_oracle_spec(obj.at("oracle").get<std::string>());
        s.oracle.kind = parsed.kind;
        s.oracle.external_cmd = parsed.external_cmd;
      } catch (const std::invalid_argument& e) {
        throw ParseError(path.string() + ": " + e.what());
      }
    }
    if (obj.contains("top_k")) s.top_k = obj.at("top_k").get<int>();
    if (obj.contains("oracle_reads")) s.oracle.num_reads = obj.at("oracle_reads").get<int>();
    if (obj.contains("oracle_budget")) s.oracle.budget = obj.at("oracle_budget").get<int>();
    if (obj.contains("oracle_capacity")) {
      s.oracle.capacity = obj.at("oracle_capacity").get<int>();
    }
    if (obj.contains("oracle_timeout")) {
      s.oracle.timeout_s = obj.at("oracle_timeout").get<double>();
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace qbb
