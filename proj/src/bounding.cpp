// SPDX-License-Identifier: Apache-2.0
#include "qbb/bounding.hpp"

#include <stdexcept>

namespace qbb {

namespace {
constexpr double kImprovementEps = 1e-12;
}

BoundResult termwise_lower_bound(const QuboModel& model) {
  BoundResult r;
  r.lower_bound = model.offset();
  r.is_exact = true;
  for (const Term& t : model.terms()) {
    if (t.coef < 0.0) r.lower_bound += t.coef;
    if (t.i != t.j) r.is_exact = false;
  }
  return r;
}

Assignment one_flip_descent(const QuboModel& model, Assignment x) {
  if (static_cast<int>(x.size()) != model.num_vars()) {
    throw std::invalid_argument("one_flip_descent: assignment length mismatch");
  }
  const int n = model.num_vars();
  const Adjacency adj = build_adjacency(model);

  // field[v] = linear_v + sum_j q_vj x_j; flipping v changes the objective
  // by field[v] when v rises and by -field[v] when it falls.
  std::vector<double> field(adj.linear);
  for (int v = 0; v < n; ++v) {
    for (const auto& [j, q] : adj.neighbors[v]) field[v] += q * x[j];
  }

  for (;;) {
    int best = -1;
    double best_delta = -kImprovementEps;
    for (int v = 0; v < n; ++v) {
      const double delta = x[v] ? -field[v] : field[v];
      if (delta < best_delta) {
        best_delta = delta;
        best = v;
      }
    }
    if (best < 0) return x;
    const double step = x[best] ? -1.0 : 1.0;
    x[best] ^= 1;
    for (const auto& [j, q] : adj.neighbors[best]) field[j] += q * step;
  }
}

Assignment round_and_repair(const QuboModel& model, const std::vector<double>& hint) {
  if (static_cast<int>(hint.size()) != model.num_vars()) {
    throw std::invalid_argument("round_and_repair: hint length mismatch");
  }
  Assignment x(hint.size());
  for (std::size_t v = 0; v < hint.size(); ++v) x[v] = hint[v] >= 0.5 ? 1 : 0;
  return one_flip_descent(model, std::move(x));
}

}  // namespace qbb
