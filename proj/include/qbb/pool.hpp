// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "qbb/qubo.hpp"

namespace qbb {

struct PoolEntry {
  Assignment bits;
  double value = 0.0;
};

// Candidate solutions sorted ascending by (value, bits); exact duplicate
// bit patterns are stored once. The (value, bits) order makes pools
// byte-stable for a given input sequence regardless of insertion order.
class SolutionPool {
 public:
  // Returns false when the bit pattern was already present.
  bool insert(Assignment bits, double value);

  const std::vector<PoolEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const PoolEntry& best() const { return entries_.front(); }

 private:
  std::vector<PoolEntry> entries_;
};

// First k entries (all when k >= size), preserving order.
SolutionPool top_k(const SolutionPool& pool, std::size_t k);

// Entries whose bits agree with every fixed variable of pa. Idempotent for
// a given pa; preserves order. Entry lengths must match pa's length.
SolutionPool filter_compatible(const SolutionPool& pool, const PartialAssignment& pa);

}  // namespace qbb
