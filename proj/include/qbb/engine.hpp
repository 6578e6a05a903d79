// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qbb/pool.hpp"
#include "qbb/qubo.hpp"

namespace qbb {

enum class NodeSelection { BestBound, DepthFirst, BreadthFirst };
enum class BranchRule { DegreePriority, IndexOrder };
enum class SolveStatus { Optimal, TimeLimit, NodeLimit };

// One subproblem of the search tree. pa lives in original variable indices;
// depth is the number of fixed variables; id is the global creation counter
// used as the deterministic tie-breaker in every frontier order.
struct Node {
  PartialAssignment pa;
  double lower_bound = 0.0;
  int depth = 0;
  std::uint64_t id = 0;
  bool bound_exact = false;  // reduced model is separable; bound is attained
};

struct SolverConfig {
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  NodeSelection node_selection = NodeSelection::BestBound;
  BranchRule branching = BranchRule::DegreePriority;
  std::optional<SolutionPool> mip_start;      // injected once before the search
  std::optional<SolutionPool> callback_pool;  // queried at every node expansion
  std::optional<std::int64_t> node_limit;
};

struct InjectionStats {
  std::int64_t offered = 0;
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Optimal;
  double best_value = std::numeric_limits<double>::infinity();
  std::optional<Assignment> best_assignment;
  std::int64_t nodes_explored = 0;
  double wall_time = 0.0;
  InjectionStats injection;  // injected offers only (MIP start + callback)
};

// Incumbent with strict-improvement acceptance: an offer is accepted only
// when its re-evaluated objective is strictly below the current value.
class IncumbentTracker {
 public:
  bool offer(const QuboModel& model, const Assignment& x);
  double value() const { return value_; }
  const std::optional<Assignment>& best() const { return best_; }

 private:
  double value_ = std::numeric_limits<double>::infinity();
  std::optional<Assignment> best_;
};

// Branch variable among the free variables of node.pa: DegreePriority takes
// the maximum root-static priority (ties toward the lowest index),
// IndexOrder the lowest free index. priorities may be empty for IndexOrder.
int select_branch_var(const Node& node, const std::vector<int>& priorities,
                      BranchRule rule);

// Exact branch-and-bound. Fathoming: bound >= incumbent, fully fixed
// subproblems, and separable reduced models (completed per-variable).
// Deterministic for a given (model, cfg) apart from time-limit truncation;
// limits are checked once per node pop.
SolveResult solve(const QuboModel& model, const SolverConfig& cfg);

}  // namespace qbb
