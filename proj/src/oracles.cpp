// SPDX-License-Identifier: Apache-2.0
#include "qbb/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <json.hpp>

#include "qbb/bounding.hpp"
#include "qbb/rng.hpp"
#include "qbb/subprocess.hpp"

namespace qbb {

namespace {

void validate_common(const QuboModel& model, const OracleConfig& cfg) {
  if (model.num_vars() < 1) throw std::invalid_argument("oracle: empty model");
  if (cfg.budget < 1) throw std::invalid_argument("oracle: budget must be positive");
  if (cfg.num_reads < 1) throw std::invalid_argument("oracle: num_reads must be positive");
}

void capacity_gate(const QuboModel& model, const OracleConfig& cfg) {
  if (cfg.capacity && model.num_vars() > *cfg.capacity) {
    throw CapacityExceeded("oracle declined: model has " +
                           std::to_string(model.num_vars()) +
                           " variables, capacity is " + std::to_string(*cfg.capacity));
  }
}

Assignment random_assignment(int n, Rng& rng) {
  Assignment x(n);
  for (int v = 0; v < n; ++v) x[v] = static_cast<std::uint8_t>(rng.below(2));
  return x;
}

double max_abs_coef(const QuboModel& model) {
  double m = 0.0;
  for (const Term& t : model.terms()) m = std::max(m, std::abs(t.coef));
  return m;
}

// field[v] = linear_v + sum_j q_vj x_j; the flip delta of v is
// field[v] when x_v == 0 and -field[v] when x_v == 1.
std::vector<double> make_fields(const Adjacency& adj, const Assignment& x) {
  std::vector<double> field(adj.linear);
  for (std::size_t v = 0; v < field.size(); ++v) {
    for (const auto& [j, q] : adj.neighbors[v]) field[v] += q * x[j];
  }
  return field;
}

void apply_flip(const Adjacency& adj, Assignment& x, std::vector<double>& field, int v) {
  const double step = x[v] ? -1.0 : 1.0;
  x[v] ^= 1;
  for (const auto& [j, q] : adj.neighbors[v]) field[j] += q * step;
}

}  // namespace

SolutionPool simulated_annealing(const QuboModel& model, const OracleConfig& cfg) {
  validate_common(model, cfg);
  const int n = model.num_vars();
  const Adjacency adj = build_adjacency(model);
  Rng rng(cfg.seed);

  const double scale = max_abs_coef(model);
  const double t_start = scale > 0.0 ? scale : 1.0;
  const double t_end = 1e-3 * t_start;
  const double ratio =
      cfg.budget > 1 ? std::pow(t_end / t_start, 1.0 / (cfg.budget - 1)) : 1.0;

  SolutionPool pool;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int read = 0; read < cfg.num_reads; ++read) {
    Assignment x = random_assignment(n, rng);
    std::vector<double> field = make_fields(adj, x);
    double value = evaluate(model, x);
    Assignment best_x = x;
    double best_value = value;

    double temp = t_start;
    for (int sweep = 0; sweep < cfg.budget; ++sweep) {
      rng.shuffle(order);
      for (int v : order) {
        const double delta = x[v] ? -field[v] : field[v];
        if (delta <= 0.0 || rng.uniform01() < std::exp(-delta / temp)) {
          apply_flip(adj, x, field, v);
          value += delta;
          if (value < best_value) {
            best_value = value;
            best_x = x;
          }
        }
      }
      temp *= ratio;
    }
    // Incremental values can drift; store the freshly evaluated objective.
    const double stored = evaluate(model, best_x);
    pool.insert(std::move(best_x), stored);
  }
  return pool;
}

SolutionPool tabu_search(const QuboModel& model, const OracleConfig& cfg) {
  validate_common(model, cfg);
  const int n = model.num_vars();
  const Adjacency adj = build_adjacency(model);
  Rng rng(cfg.seed);
  const long long tenure = 10 + n / 10;

  SolutionPool pool;
  for (int read = 0; read < cfg.num_reads; ++read) {
    Assignment x = random_assignment(n, rng);
    std::vector<double> field = make_fields(adj, x);
    double value = evaluate(model, x);
    Assignment best_x = x;
    double best_value = value;
    std::vector<long long> last_flip(n, std::numeric_limits<long long>::min() / 2);

    for (long long iter = 1; iter <= cfg.budget; ++iter) {
      int chosen = -1;
      double chosen_delta = 0.0;
      int fallback = -1;
      double fallback_delta = 0.0;
      for (int v = 0; v < n; ++v) {
        const double delta = x[v] ? -field[v] : field[v];
        const bool tabu = iter - last_flip[v] <= tenure;
        const bool aspires = value + delta < best_value;
        if (!tabu || aspires) {
          if (chosen < 0 || delta < chosen_delta) {
            chosen = v;
            chosen_delta = delta;
          }
        }
        if (fallback < 0 || delta < fallback_delta) {
          fallback = v;
          fallback_delta = delta;
        }
      }
      if (chosen < 0) {  // everything tabu and nothing aspiring: take the best move anyway
        chosen = fallback;
        chosen_delta = fallback_delta;
      }
      apply_flip(adj, x, field, chosen);
      value += chosen_delta;
      last_flip[chosen] = iter;
      if (value < best_value) {
        best_value = value;
        best_x = x;
      }
    }
    const double stored = evaluate(model, best_x);
    pool.insert(std::move(best_x), stored);
  }
  return pool;
}

SolutionPool greedy_construct(const QuboModel& model, const OracleConfig& cfg) {
  validate_common(model, cfg);
  const int n = model.num_vars();
  const Adjacency adj = build_adjacency(model);
  Rng rng(cfg.seed);

  SolutionPool pool;
  std::vector<int> ties;
  for (int read = 0; read < cfg.num_reads; ++read) {
    Assignment x(n, 0);
    // With x == 0 the marginal gain of raising v is exactly field[v].
    std::vector<double> field(adj.linear);
    for (;;) {
      double best_gain = 0.0;
      ties.clear();
      for (int v = 0; v < n; ++v) {
        if (x[v]) continue;
        if (field[v] < best_gain) {
          best_gain = field[v];
          ties.clear();
          ties.push_back(v);
        } else if (field[v] == best_gain && !ties.empty()) {
          ties.push_back(v);
        }
      }
      if (ties.empty()) break;  // no strictly negative gain left
      const int v = ties[static_cast<std::size_t>(rng.below(ties.size()))];
      x[v] = 1;
      for (const auto& [j, q] : adj.neighbors[v]) field[j] += q;
    }
    Assignment polished = one_flip_descent(model, std::move(x));
    const double value = evaluate(model, polished);
    pool.insert(std::move(polished), value);
  }
  return pool;
}

std::string encode_oracle_request(const QuboModel& model, int num_reads,
                                  std::uint64_t seed) {
  nlohmann::json req;
  req["n"] = model.num_vars();
  auto& terms = req["terms"] = nlohmann::json::array();
  for (const Term& t : model.terms()) {
    terms.push_back(nlohmann::json::array({t.i, t.j, t.coef}));
  }
  req["offset"] = model.offset();
  req["num_reads"] = num_reads;
  req["seed"] = seed;
  return req.dump();
}

SolutionPool parse_oracle_response(const QuboModel& model, const std::string& line) {
  nlohmann::json resp;
  try {
    resp = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("oracle response is not valid JSON: ") + e.what());
  }
  if (!resp.is_object() || !resp.contains("samples") || !resp["samples"].is_array()) {
    throw ProtocolError("oracle response lacks a samples array");
  }
  SolutionPool pool;
  const int n = model.num_vars();
  for (const auto& sample : resp["samples"]) {
    if (!sample.is_object() || !sample.contains("bits") || !sample["bits"].is_string()) {
      throw ProtocolError("oracle sample lacks a bits string");
    }
    const std::string& bits = sample["bits"].get_ref<const std::string&>();
    if (static_cast<int>(bits.size()) != n) {
      throw ProtocolError("oracle sample has " + std::to_string(bits.size()) +
                          " bits, expected " + std::to_string(n));
    }
    Assignment x(n);
    for (int v = 0; v < n; ++v) {
      if (bits[v] != '0' && bits[v] != '1') {
        throw ProtocolError("oracle sample contains a character other than 0/1");
      }
      x[v] = bits[v] == '1';
    }
    // Reported energies are advisory only; store the locally computed value.
    const double value = evaluate(model, x);
    pool.insert(std::move(x), value);
  }
  return pool;
}

SolutionPool external_oracle(const QuboModel& model, const OracleConfig& cfg) {
  if (model.num_vars() < 1) throw std::invalid_argument("oracle: empty model");
  if (cfg.num_reads < 1) throw std::invalid_argument("oracle: num_reads must be positive");
  if (cfg.external_cmd.empty()) {
    throw std::invalid_argument("oracle: external command is empty");
  }
  capacity_gate(model, cfg);  // must reject before the child is launched

  const std::string request =
      encode_oracle_request(model, cfg.num_reads, cfg.seed) + "\n";
  SubprocessResult res = run_subprocess(cfg.external_cmd, request, cfg.timeout_s);
  if (res.timed_out) {
    throw OracleTimeout("external oracle exceeded " + std::to_string(cfg.timeout_s) +
                        " s and was killed");
  }
  if (res.exit_status != 0) {
    throw ProtocolError("external oracle exited with status " +
                        std::to_string(res.exit_status));
  }
  const std::size_t eol = res.output.find('\n');
  const std::string line =
      eol == std::string::npos ? res.output : res.output.substr(0, eol);
  if (line.empty()) throw ProtocolError("external oracle produced no response line");
  return parse_oracle_response(model, line);
}

SolutionPool run_oracle(const QuboModel& model, const OracleConfig& cfg) {
  capacity_gate(model, cfg);
  switch (cfg.kind) {
    case OracleKind::SimulatedAnnealing: return simulated_annealing(model, cfg);
    case OracleKind::TabuSearch: return tabu_search(model, cfg);
    case OracleKind::Greedy: return greedy_construct(model, cfg);
    case OracleKind::External: return external_oracle(model, cfg);
  }
  throw std::invalid_argument("run_oracle: unknown oracle kind");
}

}  // namespace qbb
