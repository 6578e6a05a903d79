// SPDX-License-Identifier: Apache-2.0
#include "qbb/pool.hpp"

#include <algorithm>
#include <stdexcept>

namespace qbb {

bool SolutionPool::insert(Assignment bits, double value) {
  PoolEntry entry{std::move(bits), value};
  auto less = [](const PoolEntry& a, const PoolEntry& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.bits < b.bits;
  };
  auto it = std::lower_bound(entries_.begin(), entries_.end(), entry, less);
  if (it != entries_.end() && it->value == entry.value && it->bits == entry.bits) {
    return false;
  }
  entries_.insert(it, std::move(entry));
  return true;
}

SolutionPool top_k(const SolutionPool& pool, std::size_t k) {
  SolutionPool out;
  const std::size_t take = std::min(k, pool.size());
  for (std::size_t e = 0; e < take; ++e) {
    out.insert(pool.entries()[e].bits, pool.entries()[e].value);
  }
  return out;
}

SolutionPool filter_compatible(const SolutionPool& pool, const PartialAssignment& pa) {
  SolutionPool out;
  for (const PoolEntry& e : pool.entries()) {
    if (e.bits.size() != pa.size()) {
      throw std::invalid_argument("filter_compatible: entry length does not match pa");
    }
    bool ok = true;
    for (std::size_t v = 0; v < pa.size() && ok; ++v) {
      if (pa[v] == VarState::Zero) ok = e.bits[v] == 0;
      else if (pa[v] == VarState::One) ok = e.bits[v] == 1;
    }
    if (ok) out.insert(e.bits, e.value);
  }
  return out;
}

}  // namespace qbb
