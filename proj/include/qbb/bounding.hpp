// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "qbb/qubo.hpp"

namespace qbb {

struct BoundResult {
  double lower_bound = 0.0;
  // True when the bound is attained exactly, i.e. the model has no
  // off-diagonal terms and each variable can be set independently.
  bool is_exact = false;
};

// offset + sum over stored coefficients of min(0, coef). Each product
// x_i x_j and each x_i ranges over {0, 1}, so every term independently
// contributes at least min(0, coef); with no off-diagonal terms the
// per-variable choices are independent and the bound is tight.
BoundResult termwise_lower_bound(const QuboModel& model);

// Repeatedly applies the best strictly improving single-bit flip
// (improvement threshold delta < -1e-12, ties broken toward the lowest
// index) until none exists. Deltas are maintained incrementally.
Assignment one_flip_descent(const QuboModel& model, Assignment x);

// Rounds a fractional hint (>= 0.5 -> 1) and polishes with one_flip_descent.
Assignment round_and_repair(const QuboModel& model, const std::vector<double>& hint);

}  // namespace qbb
