// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures and independent reference implementations. The brute-force
// minimizers deliberately avoid the library's evaluation and adjacency code:
// they recompute everything from the raw term list, so a library bug cannot
// hide by agreeing with itself.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qbb/qubo.hpp"

namespace support {

// Three mutually coupled variables with negative fields: any single variable
// set to 1 gives the optimum -1, any pair gives 0, all three give +3.
inline qbb::QuboModel triangle_model() {
  return qbb::QuboModel(3, {{0, 0, -1.0},
                            {1, 1, -1.0},
                            {2, 2, -1.0},
                            {0, 1, 2.0},
                            {0, 2, 2.0},
                            {1, 2, 2.0}});
}

// Four variables, no diagonal terms, unique optimum -8 at (1,0,0,1).
// Degrees are [3,2,2,3]; the termwise bound at the root is -14.
inline qbb::QuboModel diamond_model() {
  return qbb::QuboModel(4, {{0, 1, 4.0},
                            {0, 2, -2.0},
                            {0, 3, -8.0},
                            {1, 3, -4.0},
                            {2, 3, 8.0}});
}

// Objective from the raw terms. Diagonal entries rely on x*x = x for bits.
inline double eval_terms(const std::vector<qbb::Term>& terms, double offset,
                         const qbb::Assignment& x) {
  double value = offset;
  for (const qbb::Term& t : terms) {
    value += t.coef * static_cast<double>(x[static_cast<std::size_t>(t.i)]) *
             static_cast<double>(x[static_cast<std::size_t>(t.j)]);
  }
  return value;
}

struct BruteResult {
  double value = 0.0;
  qbb::Assignment argmin;
};

// Gray-code walk over all 2^n assignments with incremental one-flip updates,
// O(2^n * max_degree). Ties resolve to the assignment reached first, which is
// deterministic but format-specific; compare values, not argmins, unless the
// optimum is known to be unique.
inline BruteResult brute_force_min(const qbb::QuboModel& model) {
  const int n = model.num_vars();
  if (n > 26) throw std::invalid_argument("brute_force_min: too many variables");
  const std::vector<qbb::Term>& terms = model.terms();

  std::vector<double> linear(static_cast<std::size_t>(n), 0.0);
  std::vector<std::vector<std::pair<int, double>>> nbr(static_cast<std::size_t>(n));
  for (const qbb::Term& t : terms) {
    if (t.i == t.j) {
      linear[static_cast<std::size_t>(t.i)] += t.coef;
    } else {
      nbr[static_cast<std::size_t>(t.i)].emplace_back(t.j, t.coef);
      nbr[static_cast<std::size_t>(t.j)].emplace_back(t.i, t.coef);
    }
  }

  qbb::Assignment x(static_cast<std::size_t>(n), 0);
  std::vector<double> field = linear;  // field[v] = linear[v] + sum q_vj x_j
  double value = model.offset();
  BruteResult best{value, x};

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    // Gray code flips the index of the lowest set bit of the step counter.
    int v = 0;
    while (((step >> v) & 1) == 0) ++v;
    const std::size_t vi = static_cast<std::size_t>(v);
    const double delta = x[vi] ? -field[vi] : field[vi];
    const double sign = x[vi] ? -1.0 : 1.0;
    x[vi] ^= 1;
    value += delta;
    for (const auto& [j, q] : nbr[vi]) {
      field[static_cast<std::size_t>(j)] += sign * q;
    }
    if (value < best.value) {
      best.value = value;
      best.argmin = x;
    }
  }
  return best;
}

// Direct enumeration, each assignment scored from scratch. Slower than the
// Gray-code walk but with no shared incremental state; cross-checks it.
inline BruteResult brute_force_min_eval(const qbb::QuboModel& model) {
  const int n = model.num_vars();
  if (n > 20) throw std::invalid_argument("brute_force_min_eval: too many variables");
  const std::vector<qbb::Term>& terms = model.terms();
  BruteResult best;
  qbb::Assignment x(static_cast<std::size_t>(n), 0);
  best.value = eval_terms(terms, model.offset(), x);
  best.argmin = x;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    for (int v = 0; v < n; ++v) x[static_cast<std::size_t>(v)] = (mask >> v) & 1;
    const double value = eval_terms(terms, model.offset(), x);
    if (value < best.value) {
      best.value = value;
      best.argmin = x;
    }
  }
  return best;
}

}  // namespace support
