// SPDX-License-Identifier: Apache-2.0
#include "qbb/engine.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qbb/bounding.hpp"
#include "qbb/graph.hpp"

namespace qbb {

namespace {

using Clock = std::chrono::steady_clock;

struct HeapEntry {
  double key = 0.0;
  Node node;
};

// Min-extraction on (key, id): std heaps surface the comparator's maximum,
// so "greater" puts the smallest pair on top.
struct HeapGreater {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.key != b.key) return a.key > b.key;
    return a.node.id > b.node.id;
  }
};

double frontier_key(const Node& node, NodeSelection sel) {
  switch (sel) {
    case NodeSelection::BestBound: return node.lower_bound;
    case NodeSelection::DepthFirst: return -static_cast<double>(node.depth);
    case NodeSelection::BreadthFirst: return static_cast<double>(node.depth);
  }
  return node.lower_bound;
}

struct ChildBounds {
  double bound0 = 0.0;
  double bound1 = 0.0;
  bool exact = false;  // both children lose the same off-diagonal terms
};

// Bounds of the two children created by fixing reduced variable rv, derived
// from the parent's reduced form in one pass over its terms.
//   fix rv = 0: rv's terms vanish.
//   fix rv = 1: rv's linear joins the offset, q_{rv,j} folds into linear_j.
ChildBounds child_bounds(const detail::FixWorkspace& ws, int rv) {
  double s_diag = 0.0;
  for (double l : ws.linear) s_diag += std::min(0.0, l);

  double s_off = 0.0;
  double min_qv = 0.0;     // sum of min(0, q) over rv's off-diagonal terms
  double fold_adj = 0.0;   // sum over neighbors j of min(0, l_j + q) - min(0, l_j)
  std::size_t deg_v = 0;
  for (const Term& t : ws.offdiag) {
    s_off += std::min(0.0, t.coef);
    if (t.i == rv || t.j == rv) {
      const int j = t.i == rv ? t.j : t.i;
      min_qv += std::min(0.0, t.coef);
      fold_adj += std::min(0.0, ws.linear[j] + t.coef) - std::min(0.0, ws.linear[j]);
      ++deg_v;
    }
  }

  const double base = s_diag - std::min(0.0, ws.linear[rv]) + s_off - min_qv;
  ChildBounds cb;
  cb.bound0 = ws.offset + base;
  cb.bound1 = ws.offset + ws.linear[rv] + base + fold_adj;
  cb.exact = deg_v == ws.offdiag.size();
  return cb;
}

// Completes a separable reduced model per variable (negative linear -> 1)
// on top of the node's fixed part.
Assignment complete_separable(const Node& node, const detail::FixWorkspace& ws) {
  Assignment x(node.pa.size());
  for (std::size_t v = 0; v < node.pa.size(); ++v) {
    x[v] = node.pa[v] == VarState::One ? 1 : 0;
  }
  for (int i = 0; i < ws.n_free; ++i) {
    x[ws.new_to_old[i]] = ws.linear[i] < 0.0 ? 1 : 0;
  }
  return x;
}

}  // namespace

bool IncumbentTracker::offer(const QuboModel& model, const Assignment& x) {
  const double value = evaluate(model, x);
  if (value < value_) {
    value_ = value;
    best_ = x;
    return true;
  }
  return false;
}

int select_branch_var(const Node& node, const std::vector<int>& priorities,
                      BranchRule rule) {
  const int n = static_cast<int>(node.pa.size());
  if (rule == BranchRule::IndexOrder) {
    for (int v = 0; v < n; ++v) {
      if (node.pa[v] == VarState::Free) return v;
    }
    return -1;
  }
  if (static_cast<int>(priorities.size()) != n) {
    throw std::invalid_argument("select_branch_var: priorities length mismatch");
  }
  int best = -1;
  for (int v = 0; v < n; ++v) {
    if (node.pa[v] != VarState::Free) continue;
    if (best < 0 || priorities[v] > priorities[best]) best = v;
  }
  return best;
}

SolveResult solve(const QuboModel& model, const SolverConfig& cfg) {
  if (model.num_vars() < 1) throw std::invalid_argument("solve: empty model");
  if (!(cfg.time_limit > 0.0)) {
    throw std::invalid_argument("solve: time_limit must be positive");
  }
  if (cfg.node_limit && *cfg.node_limit < 1) {
    throw std::invalid_argument("solve: node_limit must be positive");
  }

  const auto start = Clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  const int n = model.num_vars();

  SolveResult result;
  IncumbentTracker incumbent;

  if (cfg.mip_start) {
    for (const PoolEntry& e : cfg.mip_start->entries()) {
      if (static_cast<int>(e.bits.size()) != n) {
        throw std::invalid_argument("solve: MIP start entry length mismatch");
      }
      ++result.injection.offered;
      if (incumbent.offer(model, e.bits)) ++result.injection.accepted;
      else ++result.injection.rejected;
    }
  }

  std::vector<int> priorities;
  if (cfg.branching == BranchRule::DegreePriority) priorities = branch_priority(model);

  std::vector<HeapEntry> frontier;
  std::uint64_t next_id = 0;
  const auto push_node = [&](Node&& node) {
    frontier.push_back({frontier_key(node, cfg.node_selection), std::move(node)});
    std::push_heap(frontier.begin(), frontier.end(), HeapGreater{});
  };

  {
    const BoundResult root = termwise_lower_bound(model);
    Node root_node;
    root_node.pa.assign(n, VarState::Free);
    root_node.lower_bound = root.lower_bound;
    root_node.depth = 0;
    root_node.id = next_id++;
    root_node.bound_exact = root.is_exact;
    push_node(std::move(root_node));
  }

  detail::FixWorkspace ws;
  result.status = SolveStatus::Optimal;
  while (!frontier.empty()) {
    // Limits are node-granular and checked after at least one pop, so every
    // nonempty solve explores the root and a completed frontier wins over a
    // simultaneous limit.
    if (result.nodes_explored > 0) {
      if (elapsed() >= cfg.time_limit) {
        result.status = SolveStatus::TimeLimit;
        break;
      }
      if (cfg.node_limit && result.nodes_explored >= *cfg.node_limit) {
        result.status = SolveStatus::NodeLimit;
        break;
      }
    }

    std::pop_heap(frontier.begin(), frontier.end(), HeapGreater{});
    Node node = std::move(frontier.back().node);
    frontier.pop_back();
    ++result.nodes_explored;

    if (node.lower_bound >= incumbent.value()) continue;

    if (cfg.callback_pool) {
      const SolutionPool compat = filter_compatible(*cfg.callback_pool, node.pa);
      if (!compat.empty()) {
        ++result.injection.offered;
        if (incumbent.offer(model, compat.best().bits)) ++result.injection.accepted;
        else ++result.injection.rejected;
        if (node.lower_bound >= incumbent.value()) continue;
      }
    }

    if (node.depth == n) {
      incumbent.offer(model, to_assignment(node.pa));
      continue;
    }

    detail::reduce(model, node.pa, ws);

    if (node.bound_exact) {
      incumbent.offer(model, complete_separable(node, ws));
      continue;
    }

    const int v = select_branch_var(node, priorities, cfg.branching);
    assert(v >= 0);
    const int rv = ws.old_to_new[v];
    const ChildBounds cb = child_bounds(ws, rv);
    assert(cb.bound0 >= node.lower_bound - 1e-9 * (1.0 + std::abs(node.lower_bound)));
    assert(cb.bound1 >= node.lower_bound - 1e-9 * (1.0 + std::abs(node.lower_bound)));

    for (int bit = 0; bit <= 1; ++bit) {
      const double child_bound = bit ? cb.bound1 : cb.bound0;
      // Children dominated by the current incumbent are fathomed at creation
      // and never enter the frontier; the pop-time check above re-tests the
      // survivors because the incumbent can improve while they wait.
      if (child_bound >= incumbent.value()) continue;
      Node child;
      child.pa = node.pa;
      child.pa[v] = bit ? VarState::One : VarState::Zero;
      child.lower_bound = child_bound;
      child.depth = node.depth + 1;
      child.id = next_id++;
      child.bound_exact = cb.exact;
      push_node(std::move(child));
    }
  }

  result.best_value = incumbent.value();
  if (incumbent.best()) result.best_assignment = *incumbent.best();
  result.wall_time = elapsed();
  return result;
}

}  // namespace qbb
