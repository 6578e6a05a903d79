// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "qbb/qubo.hpp"

namespace qbb {

// Interaction graph G(Q): one vertex per variable, an edge per stored
// off-diagonal term. Neighbor lists are sorted ascending.
struct InteractionGraph {
  std::vector<std::vector<int>> adjacency;
  std::vector<int> degrees;
};

InteractionGraph interaction_graph(const QuboModel& model);

// Branch priority of variable v is its degree in G(Q): variables coupled to
// many others are branched first so fixing them decouples the rest.
std::vector<int> branch_priority(const QuboModel& model);

}  // namespace qbb
