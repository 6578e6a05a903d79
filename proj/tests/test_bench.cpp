// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbb/bench.hpp"
#include "qbb/instances.hpp"

#include "support.hpp"

using namespace qbb;

namespace {

std::filesystem::path temp_log(const std::string& stem) {
  const auto path = std::filesystem::temp_directory_path() / (stem + ".log");
  std::filesystem::remove(path);
  return path;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

RunRecord make_record(const std::string& instance, const std::string& strategy,
                      double reported_time, std::int64_t nodes,
                      RunStatus status = RunStatus::Optimal) {
  RunRecord r;
  r.instance_id = instance;
  r.strategy = strategy;
  r.status = status;
  r.wall_time = reported_time;
  r.reported_time = reported_time;
  r.nodes_explored = nodes;
  if (status == RunStatus::Optimal) r.best_value = 0.0;
  return r;
}

std::vector<StrategySpec> basic_strategies() {
  StrategySpec base;
  base.name = "Baseline";
  base.branching = BranchRule::DegreePriority;

  StrategySpec mip = base;
  mip.name = "MipStart";
  mip.injection = InjectionKind::MipStartTopK;
  mip.oracle.kind = OracleKind::SimulatedAnnealing;
  mip.oracle.budget = 30;
  mip.oracle.num_reads = 10;
  mip.top_k = 3;

  StrategySpec cb = base;
  cb.name = "Callback";
  cb.injection = InjectionKind::PoolCallback;
  cb.oracle.kind = OracleKind::SimulatedAnnealing;
  cb.oracle.budget = 30;
  cb.oracle.num_reads = 10;

  return {base, mip, cb};
}

std::vector<NamedInstance> basic_instances() {
  return {{"triangle", support::triangle_model()}, {"diamond", support::diamond_model()}};
}

}  // namespace

TEST_CASE("shifted geometric mean identities") {
  CHECK(sgm({0.0, 90.0}, 10.0) == doctest::Approx(21.6227766).epsilon(1e-7));
  CHECK(sgm({42.0}, 10.0) == doctest::Approx(42.0));
  CHECK(sgm({7.0, 7.0, 7.0}, 3.0) == doctest::Approx(7.0).epsilon(1e-9));
  // Zero shift reduces to the plain geometric mean.
  CHECK(sgm({2.0, 8.0}, 0.0) == doctest::Approx(4.0));
  // Monotone in each coordinate.
  CHECK(sgm({5.0, 10.0}, 10.0) < sgm({5.0, 11.0}, 10.0));
  CHECK(sgm10({0.0, 90.0}) == doctest::Approx(21.6227766).epsilon(1e-7));

  CHECK_THROWS_AS(sgm({}, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(sgm({-1.0}, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(sgm({1.0}, -0.5), std::invalid_argument);
}

TEST_CASE("records round trip through JSON lines") {
  RunRecord r = make_record("inst-1", "Baseline", 1.25, 42);
  r.best_value = -8.0;
  r.seed = 99;
  const std::string line = record_to_json(r);
  const RunRecord back = record_from_json(line);
  CHECK(back.instance_id == r.instance_id);
  CHECK(back.strategy == r.strategy);
  CHECK(back.status == RunStatus::Optimal);
  CHECK(back.wall_time == r.wall_time);
  CHECK(back.reported_time == r.reported_time);
  CHECK(back.nodes_explored == r.nodes_explored);
  CHECK(back.best_value == r.best_value);
  CHECK(back.seed == r.seed);

  RunRecord failed = make_record("inst-2", "X", 30.0, 7, RunStatus::Failed);
  failed.best_value.reset();
  const RunRecord fb = record_from_json(record_to_json(failed));
  CHECK(fb.status == RunStatus::Failed);
  CHECK_FALSE(fb.best_value.has_value());
  CHECK(record_to_json(failed).find("null") != std::string::npos);

  CHECK_THROWS_AS(record_from_json("not json"), ParseError);
  CHECK_THROWS_AS(record_from_json(R"({"instance":"a"})"), ParseError);
}

TEST_CASE("record logs load with line context on errors") {
  const auto path = temp_log("records_load");
  {
    std::ofstream out(path);
    out << record_to_json(make_record("a", "S", 1.0, 5)) << "\n\n"
        << record_to_json(make_record("b", "S", 2.0, 6)) << '\n';
  }
  const std::vector<RunRecord> records = load_records(path);
  REQUIRE(records.size() == 2);
  CHECK(records[0].instance_id == "a");
  CHECK(records[1].instance_id == "b");

  {
    std::ofstream out(path, std::ios::app);
    out << "garbage\n";
  }
  try {
    load_records(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":4:") != std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST_CASE("report reproduces the reference delta formatting") {
  // SGM pair (28170.0, 23304.8) must print as a -17.3% delta; single-record
  // strategies make the SGM equal the recorded value itself.
  std::vector<RunRecord> records;
  records.push_back(make_record("i", "Baseline", 28170.0, 28170));
  records.push_back(make_record("i", "DegreeRule", 23304.8, 23305));
  const std::string text = report(records, "Baseline", ReportFormat::Text);
  CHECK(text.find("-17.3%") != std::string::npos);

  records.clear();
  records.push_back(make_record("i", "Baseline", 154.5, 100));
  records.push_back(make_record("i", "Better", 137.4, 100));
  records.push_back(make_record("i", "Worse", 307.8, 100));
  const std::string text2 = report(records, "Baseline", ReportFormat::Text);
  CHECK(text2.find("-11.1%") != std::string::npos);
  CHECK(text2.find("+99.2%") != std::string::npos);
}

TEST_CASE("report formats render every strategy once") {
  std::vector<RunRecord> records;
  records.push_back(make_record("a", "Baseline", 2.0, 10));
  records.push_back(make_record("b", "Baseline", 4.0, 20));
  records.push_back(make_record("a", "Other", 1.0, 5));
  records.push_back(make_record("b", "Other", 2.0, 10, RunStatus::TimeLimit));

  const std::string md = report(records, "Baseline", ReportFormat::Markdown);
  CHECK(md.find("| Strategy") != std::string::npos);
  CHECK(md.find("Baseline") != std::string::npos);
  CHECK(md.find("Other") != std::string::npos);
  CHECK(md.find("1/2") != std::string::npos);  // Other solved one of two

  const std::string csv = report(records, "Baseline", ReportFormat::Csv);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "strategy,solved,runs,sgm_nodes,nodes_delta,sgm_time,time_delta");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 2);

  CHECK_THROWS_AS(report(records, "NoSuch", ReportFormat::Text), std::invalid_argument);
  CHECK_THROWS_AS(report({}, "Baseline", ReportFormat::Text), std::invalid_argument);
}

TEST_CASE("instance filter keeps hard but solvable instances") {
  std::vector<RunRecord> records;
  // hard-and-solved: baseline slow, another strategy solved it.
  records.push_back(make_record("hard", "Baseline", 5.0, 100, RunStatus::TimeLimit));
  records.push_back(make_record("hard", "Other", 2.0, 50));
  // easy: baseline fast.
  records.push_back(make_record("easy", "Baseline", 0.2, 10));
  records.push_back(make_record("easy", "Other", 0.1, 5));
  // hopeless: slow everywhere, never solved.
  records.push_back(make_record("hopeless", "Baseline", 5.0, 100, RunStatus::TimeLimit));
  records.push_back(make_record("hopeless", "Other", 5.0, 100, RunStatus::TimeLimit));

  const std::set<std::string> kept = filter_instances(records, "Baseline", 1.0);
  CHECK(kept == std::set<std::string>{"hard"});
}

TEST_CASE("matrix runs produce one record per pair and resume from the log") {
  const auto path = temp_log("matrix");
  BenchOptions opt;
  opt.time_limit = 10.0;

  const std::vector<RunRecord> records =
      run_matrix(basic_instances(), basic_strategies(), opt, path);
  REQUIRE(records.size() == 6);
  for (const RunRecord& r : records) {
    CHECK(r.status == RunStatus::Optimal);
    REQUIRE(r.best_value.has_value());
    CHECK(r.reported_time <= opt.time_limit);
  }
  // (instance, strategy) cross order: instances outer, strategies inner.
  CHECK(records[0].instance_id == "triangle");
  CHECK(records[0].strategy == "Baseline");
  CHECK(records[1].strategy == "MipStart");
  CHECK(records[3].instance_id == "diamond");
  CHECK(records[0].best_value == -1.0);
  CHECK(records[3].best_value == -8.0);

  const std::string first_bytes = slurp(path);
  CHECK(std::count(first_bytes.begin(), first_bytes.end(), '\n') == 6);

  // A full rerun reuses every record: the log must not grow by a byte.
  const std::vector<RunRecord> again =
      run_matrix(basic_instances(), basic_strategies(), opt, path);
  CHECK(again.size() == 6);
  CHECK(slurp(path) == first_bytes);

  // Truncate to the first four lines and rerun: exactly the two missing
  // pairs are recomputed and appended.
  std::istringstream lines(first_bytes);
  std::string line, kept;
  for (int i = 0; i < 4 && std::getline(lines, line); ++i) kept += line + '\n';
  {
    std::ofstream out(path, std::ios::trunc);
    out << kept;
  }
  const std::vector<RunRecord> resumed =
      run_matrix(basic_instances(), basic_strategies(), opt, path);
  REQUIRE(resumed.size() == 6);
  const std::string final_bytes = slurp(path);
  CHECK(std::count(final_bytes.begin(), final_bytes.end(), '\n') == 6);
  CHECK(final_bytes.substr(0, kept.size()) == kept);
  std::filesystem::remove(path);
}

TEST_CASE("per-run failures become failed records and the matrix continues") {
  const auto path = temp_log("failures");
  StrategySpec broken;
  broken.name = "Broken";
  broken.injection = InjectionKind::MipStartTopK;
  broken.oracle.kind = OracleKind::External;
  broken.oracle.external_cmd = "/bin/false";

  StrategySpec ok;
  ok.name = "Plain";

  BenchOptions opt;
  const std::vector<RunRecord> records =
      run_matrix(basic_instances(), {broken, ok}, opt, path);
  REQUIRE(records.size() == 4);
  for (const RunRecord& r : records) {
    if (r.strategy == "Broken") {
      CHECK(r.status == RunStatus::Failed);
      CHECK_FALSE(r.best_value.has_value());
    } else {
      CHECK(r.status == RunStatus::Optimal);
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("parallel execution yields the same records as sequential") {
  const auto seq_path = temp_log("seq");
  const auto par_path = temp_log("par");
  std::vector<NamedInstance> instances = basic_instances();
  instances.emplace_back("parity", gen_xorsat(6, 3, 3, 3).model);

  BenchOptions opt;
  const std::vector<RunRecord> seq =
      run_matrix(instances, basic_strategies(), opt, seq_path);
  opt.jobs = 3;
  const std::vector<RunRecord> par =
      run_matrix(instances, basic_strategies(), opt, par_path);

  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].instance_id == par[i].instance_id);
    CHECK(seq[i].strategy == par[i].strategy);
    CHECK(seq[i].status == par[i].status);
    CHECK(seq[i].nodes_explored == par[i].nodes_explored);
    CHECK(seq[i].best_value == par[i].best_value);
  }
  std::filesystem::remove(seq_path);
  std::filesystem::remove(par_path);
}

TEST_CASE("best solution injection dominates the plain run") {
  const auto path = temp_log("bestsol");
  StrategySpec base;
  base.name = "Baseline";
  StrategySpec best = base;
  best.name = "BestSolution";
  best.injection = InjectionKind::BestSolution;

  BenchOptions opt;
  const std::vector<RunRecord> records =
      run_matrix(basic_instances(), {base, best}, opt, path);
  REQUIRE(records.size() == 4);
  CHECK(records[1].nodes_explored <= records[0].nodes_explored);
  CHECK(records[3].nodes_explored <= records[2].nodes_explored);
  CHECK(records[1].best_value == records[0].best_value);
  std::filesystem::remove(path);
}

TEST_CASE("timeout records report the limit itself") {
  const auto path = temp_log("timeout");
  StrategySpec base;
  base.name = "Baseline";
  BenchOptions opt;
  opt.time_limit = 0.05;
  std::vector<NamedInstance> instances;
  instances.emplace_back("hard", gen_xorsat(20, 3, 3, 11).model);

  const std::vector<RunRecord> records = run_matrix(instances, {base}, opt, path);
  REQUIRE(records.size() == 1);
  CHECK(records[0].status == RunStatus::TimeLimit);
  CHECK(records[0].reported_time == 0.05);
  CHECK(records[0].wall_time >= 0.05);
  std::filesystem::remove(path);
}

TEST_CASE("strategy matrix files parse into specs") {
  const auto path = temp_log("matrix_json");
  {
    std::ofstream out(path);
    out << R"([
      {"name": "Baseline", "branching": "index", "node_selection": "best-bound"},
      {"name": "Degree", "branching": "degree"},
      {"name": "Warm", "injection": "mip-start", "oracle": "sa",
       "top_k": 5, "oracle_reads": 20, "oracle_budget": 40},
      {"name": "Hook", "injection": "callback", "oracle": "tabu",
       "node_selection": "dfs"},
      {"name": "Wire", "injection": "mip-start", "oracle": "external:/bin/cat",
       "oracle_capacity": 30},
      {"name": "Oracle-free", "injection": "best-solution"}
    ])";
  }
  const std::vector<StrategySpec> specs = load_strategy_matrix(path);
  REQUIRE(specs.size() == 6);
  CHECK(specs[0].branching == BranchRule::IndexOrder);
  CHECK(specs[0].injection == InjectionKind::None);
  CHECK(specs[1].branching == BranchRule::DegreePriority);
  CHECK(specs[2].injection == InjectionKind::MipStartTopK);
  CHECK(specs[2].oracle.kind == OracleKind::SimulatedAnnealing);
  CHECK(specs[2].top_k == 5);
  CHECK(specs[2].oracle.num_reads == 20);
  CHECK(specs[2].oracle.budget == 40);
  CHECK(specs[3].injection == InjectionKind::PoolCallback);
  CHECK(specs[3].oracle.kind == OracleKind::TabuSearch);
  CHECK(specs[3].node_selection == NodeSelection::DepthFirst);
  CHECK(specs[4].oracle.kind == OracleKind::External);
  CHECK(specs[4].oracle.external_cmd == "/bin/cat");
  REQUIRE(specs[4].oracle.capacity.has_value());
  CHECK(*specs[4].oracle.capacity == 30);
  CHECK(specs[5].injection == InjectionKind::BestSolution);

  const auto expect_bad = [&](const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    out << text;
    out.close();
    CHECK_THROWS_AS(load_strategy_matrix(path), ParseError);
  };
  expect_bad(R"({"name": "NotAnArray"})");
  expect_bad(R"([{"branching": "degree"}])");                          // unnamed
  expect_bad(R"([{"name": "A"}, {"name": "A"}])");                     // duplicate
  expect_bad(R"([{"name": "A", "branching": "widest"}])");             // unknown rule
  expect_bad(R"([{"name": "A", "injection": "mip-start"}])");          // no oracle
  expect_bad(R"([{"name": "A", "injection": "mip-start", "oracle": "quantum"}])");
  std::filesystem::remove(path);
}
