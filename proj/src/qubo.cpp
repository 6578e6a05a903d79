// SPDX-License-Identifier: Apache-2.0
#include "qbb/qubo.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qbb {

QuboModel::QuboModel(int n, std::vector<Term> terms, double offset)
    : n_(n), offset_(offset) {
  if (n < 1) throw std::invalid_argument("QuboModel: variable count must be positive");
  if (!std::isfinite(offset)) throw std::invalid_argument("QuboModel: non-finite offset");
  for (Term& t : terms) {
    if (t.i < 0 || t.i >= n || t.j < 0 || t.j >= n) {
      throw std::invalid_argument("QuboModel: index out of range: (" +
                                  std::to_string(t.i) + ", " + std::to_string(t.j) + ")");
    }
    if (!std::isfinite(t.coef)) {
      throw std::invalid_argument("QuboModel: non-finite coefficient at (" +
                                  std::to_string(t.i) + ", " + std::to_string(t.j) + ")");
    }
    if (t.i > t.j) std::swap(t.i, t.j);
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  terms_.reserve(terms.size());
  for (const Term& t : terms) {
    if (!terms_.empty() && terms_.back().i == t.i && terms_.back().j == t.j) {
      terms_.back().coef += t.coef;
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const Term& t) { return t.coef == 0.0; });
}

QuboModel QuboModel::from_canonical(int n, std::vector<Term> terms, double offset) {
  QuboModel m;
  m.n_ = n;
  m.offset_ = offset;
  m.terms_ = std::move(terms);
#ifndef NDEBUG
  assert(n >= 0);
  for (std::size_t k = 0; k < m.terms_.size(); ++k) {
    const Term& t = m.terms_[k];
    assert(t.i >= 0 && t.i <= t.j && t.j < n && t.coef != 0.0);
    if (k > 0) {
      const Term& p = m.terms_[k - 1];
      assert(p.i < t.i || (p.i == t.i && p.j < t.j));
    }
  }
#endif
  return m;
}

double evaluate(const QuboModel& model, const Assignment& x) {
  if (static_cast<int>(x.size()) != model.num_vars()) {
    throw std::invalid_argument("evaluate: assignment length " + std::to_string(x.size()) +
                                " does not match model size " +
                                std::to_string(model.num_vars()));
  }
  double acc = model.offset();
  for (const Term& t : model.terms()) {
    if (t.i == t.j) {
      acc += t.coef * x[t.i];
    } else {
      acc += t.coef * x[t.i] * x[t.j];
    }
  }
  return acc;
}

Adjacency build_adjacency(const QuboModel& model) {
  Adjacency adj;
  adj.linear.assign(model.num_vars(), 0.0);
  adj.neighbors.assign(model.num_vars(), {});
  for (const Term& t : model.terms()) {
    if (t.i == t.j) {
      adj.linear[t.i] = t.coef;
    } else {
      adj.neighbors[t.i].emplace_back(t.j, t.coef);
      adj.neighbors[t.j].emplace_back(t.i, t.coef);
    }
  }
  return adj;
}

int free_count(const PartialAssignment& pa) {
  int k = 0;
  for (VarState s : pa) k += (s == VarState::Free);
  return k;
}

Assignment to_assignment(const PartialAssignment& pa) {
  Assignment x(pa.size());
  for (std::size_t v = 0; v < pa.size(); ++v) {
    if (pa[v] == VarState::Free) {
      throw std::invalid_argument("to_assignment: variable " + std::to_string(v) +
                                  " is still free");
    }
    x[v] = pa[v] == VarState::One ? 1 : 0;
  }
  return x;
}

namespace detail {

void reduce(const QuboModel& model, const PartialAssignment& pa, FixWorkspace& ws) {
  const int n = model.num_vars();
  if (static_cast<int>(pa.size()) != n) {
    throw std::invalid_argument("fix_variables: partial assignment length mismatch");
  }
  ws.old_to_new.assign(n, -1);
  ws.new_to_old.clear();
  for (int v = 0; v < n; ++v) {
    if (pa[v] == VarState::Free) {
      ws.old_to_new[v] = static_cast<int>(ws.new_to_old.size());
      ws.new_to_old.push_back(v);
    }
  }
  ws.n_free = static_cast<int>(ws.new_to_old.size());
  ws.linear.assign(ws.n_free, 0.0);
  ws.offdiag.clear();
  ws.offset = model.offset();

  for (const Term& t : model.terms()) {
    const VarState si = pa[t.i];
    if (t.i == t.j) {
      if (si == VarState::Free) {
        ws.linear[ws.old_to_new[t.i]] += t.coef;
      } else if (si == VarState::One) {
        ws.offset += t.coef;
      }
      continue;
    }
    const VarState sj = pa[t.j];
    if (si == VarState::Zero || sj == VarState::Zero) continue;
    if (si == VarState::Free && sj == VarState::Free) {
      ws.offdiag.push_back({ws.old_to_new[t.i], ws.old_to_new[t.j], t.coef});
    } else if (si == VarState::Free) {  // sj == One
      ws.linear[ws.old_to_new[t.i]] += t.coef;
    } else if (sj == VarState::Free) {  // si == One
      ws.linear[ws.old_to_new[t.j]] += t.coef;
    } else {  // both One
      ws.offset += t.coef;
    }
  }
  // Free variables keep their relative order, so the reindexed off-diagonal
  // terms inherit the input's (i, j) sort; no re-sort needed.
}

}  // namespace detail

FixResult fix_variables(const QuboModel& model, const PartialAssignment& pa) {
  detail::FixWorkspace ws;
  detail::reduce(model, pa, ws);

  std::vector<Term> terms;
  terms.reserve(ws.offdiag.size() + ws.n_free);
  std::size_t od = 0;
  for (int i = 0; i < ws.n_free; ++i) {
    if (ws.linear[i] != 0.0) terms.push_back({i, i, ws.linear[i]});
    while (od < ws.offdiag.size() && ws.offdiag[od].i == i) {
      if (ws.offdiag[od].coef != 0.0) terms.push_back(ws.offdiag[od]);
      ++od;
    }
  }

  FixResult r;
  // A pa with no free variables collapses to the 0-variable program whose
  // value is the accumulated offset; only user-built models require n >= 1.
  r.reduced = QuboModel::from_canonical(ws.n_free, std::move(terms), ws.offset);
  r.old_to_new = std::move(ws.old_to_new);
  r.new_to_old = std::move(ws.new_to_old);
  return r;
}

}  // namespace qbb
