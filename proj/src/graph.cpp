// SPDX-License-Identifier: Apache-2.0
#include "qbb/graph.hpp"

namespace qbb {

InteractionGraph interaction_graph(const QuboModel& model) {
  InteractionGraph g;
  g.adjacency.assign(model.num_vars(), {});
  // Terms arrive sorted by (i, j), so every adjacency list is built in
  // ascending order: partners below v are appended while v is the second
  // index, partners above v afterwards.
  for (const Term& t : model.terms()) {
    if (t.i == t.j) continue;
    g.adjacency[t.i].push_back(t.j);
    g.adjacency[t.j].push_back(t.i);
  }
  g.degrees.resize(model.num_vars());
  for (int v = 0; v < model.num_vars(); ++v) {
    g.degrees[v] = static_cast<int>(g.adjacency[v].size());
  }
  return g;
}

std::vector<int> branch_priority(const QuboModel& model) {
  return interaction_graph(model).degrees;
}

}  // namespace qbb
