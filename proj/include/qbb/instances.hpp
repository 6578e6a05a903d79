// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbb/qubo.hpp"

namespace qbb {

struct XorsatClause {
  std::vector<int> vars;  // k distinct core variables, sorted
  int parity = 0;         // XOR of the planted assignment over vars
};

// Planted k-XORSAT penalty model. Core variables are 0..n_core-1; each
// clause appends its auxiliary slack variables after the core block. The
// planted assignment has objective exactly 0, the global minimum (the
// model is a sum of squared clause penalties).
struct PlantedInstance {
  QuboModel model;
  Assignment planted;  // length model.num_vars(): core bits then aux bits
  int n_core = 0;
  int k = 0;
  int r = 0;
  std::uint64_t seed = 0;
  std::vector<XorsatClause> clauses;
};

// Random r-regular k-XORSAT via configuration-model stub pairing; pairings
// with a repeated variable inside a clause or a duplicate clause are
// resampled (bounded retries, then an error). Requires k in {3, 5},
// n_core >= k and n_core * r divisible by k. Clause with parity b becomes
// (sum of its variables - b - 2 w1 [- 4 w2])^2 expanded over binaries.
PlantedInstance gen_xorsat(int n_core, int k, int r, std::uint64_t seed);

// Random integer-coefficient model: every pair i < j (and every diagonal)
// receives a nonzero uniform coefficient in [-coef_range, coef_range] with
// probability density.
QuboModel gen_random(int n, double density, int coef_range, std::uint64_t seed);

// Parse failure with file/line context in what().
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plain text triplet format. First data line: "n nnz"; then nnz lines
// "i j coef" (0-based, i <= j); optional trailer "offset <real>"; lines
// starting with '#' are comments. Coefficients round-trip exactly.
void save_model(const QuboModel& model, const std::filesystem::path& path);
QuboModel load_model(const std::filesystem::path& path);

}  // namespace qbb
