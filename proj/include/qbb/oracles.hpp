// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "qbb/pool.hpp"
#include "qbb/qubo.hpp"

namespace qbb {

enum class OracleKind { SimulatedAnnealing, TabuSearch, Greedy, External };

struct OracleConfig {
  OracleKind kind = OracleKind::SimulatedAnnealing;
  std::uint64_t seed = 0;
  int budget = 100;    // sweeps (SA) / iterations (tabu); unused by greedy
  int num_reads = 10;  // independent restarts / requested samples
  std::optional<int> capacity;  // max variable count the oracle accepts
  std::string external_cmd;     // External: shell command
  double timeout_s = 60.0;      // External: wall-clock cap per invocation
};

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Model exceeds cfg.capacity; raised before any work is launched.
struct CapacityExceeded final : OracleError {
  using OracleError::OracleError;
};
// External peer broke the wire contract (bad JSON, bad bits, nonzero exit).
struct ProtocolError final : OracleError {
  using OracleError::OracleError;
};
// External peer missed the wall-clock deadline and was killed.
struct OracleTimeout final : OracleError {
  using OracleError::OracleError;
};

// Geometric-cooling simulated annealing: num_reads independent chains of
// `budget` sweeps; each sweep proposes every bit once in random order;
// worse moves accepted with probability exp(-delta / T); T decays
// geometrically from max|coef| down to 1e-3 * max|coef|.
SolutionPool simulated_annealing(const QuboModel& model, const OracleConfig& cfg);

// Best-admissible single-flip tabu search with tenure 10 + n/10 and
// aspiration (a tabu move beating the read's best is always allowed).
SolutionPool tabu_search(const QuboModel& model, const OracleConfig& cfg);

// Greedy construction from the all-zero point: repeatedly raises the free
// variable with the most negative marginal gain (ties broken at random per
// read), then polishes with one_flip_descent.
SolutionPool greedy_construct(const QuboModel& model, const OracleConfig& cfg);

// Line-delimited JSON handshake with cfg.external_cmd over stdin/stdout.
// Reported energies are advisory: every sample is re-evaluated locally.
SolutionPool external_oracle(const QuboModel& model, const OracleConfig& cfg);

// Uniform entry point: applies the capacity gate, then dispatches on kind.
// The gate lives here, not in the engine, so every injection path respects
// the emulated hardware limit the same way.
SolutionPool run_oracle(const QuboModel& model, const OracleConfig& cfg);

// Wire helpers, exposed for protocol tests.
std::string encode_oracle_request(const QuboModel& model, int num_reads,
                                  std::uint64_t seed);
SolutionPool parse_oracle_response(const QuboModel& model, const std::string& line);

}  // namespace qbb
