// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace qbb {

// One stored coefficient of a QUBO in canonical folded form. Diagonal
// entries (i == j) are linear coefficients (x^2 == x for binaries);
// off-diagonal entries (i < j) carry the summed coefficient of the
// unordered pair, stored once.
struct Term {
  int i = 0;
  int j = 0;
  double coef = 0.0;

  friend bool operator==(const Term& a, const Term& b) {
    return a.i == b.i && a.j == b.j && a.coef == b.coef;
  }
};

// Binary assignment; entry v is the value of variable v (0 or 1).
using Assignment = std::vector<std::uint8_t>;

enum class VarState : std::uint8_t { Free, Zero, One };

// Per-variable fixing state during search; entry v is the state of
// variable v of the original model.
using PartialAssignment = std::vector<VarState>;

// Sparse QUBO: minimize offset + sum_i Q_ii x_i + sum_{i<j} q_ij x_i x_j
// over x in {0,1}^n. Immutable after construction. Terms are kept sorted
// by (i, j) with i <= j, duplicates accumulated, exact zeros dropped, so
// equal models have byte-equal term vectors and evaluation order is fixed.
class QuboModel {
 public:
  QuboModel() = default;

  // Canonicalizes arbitrary triplets: (j, i) entries are folded onto
  // (i, j), duplicates summed, zeros dropped. Throws std::invalid_argument
  // on out-of-range indices or non-finite coefficients.
  QuboModel(int n, std::vector<Term> terms, double offset = 0.0);

  int num_vars() const { return n_; }
  double offset() const { return offset_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }

  friend bool operator==(const QuboModel& a, const QuboModel& b) {
    return a.n_ == b.n_ && a.offset_ == b.offset_ && a.terms_ == b.terms_;
  }

  // Trusted constructor for terms already in canonical order (sorted,
  // folded, no zeros); used by reductions that produce canonical output.
  static QuboModel from_canonical(int n, std::vector<Term> terms, double offset);

 private:
  int n_ = 0;
  std::vector<Term> terms_;
  double offset_ = 0.0;
};

// Objective value of a full assignment; deterministic index-sorted
// summation order. Throws std::invalid_argument on length mismatch.
double evaluate(const QuboModel& model, const Assignment& x);

// Dense per-variable view used by the incremental flip machinery: linear
// holds the diagonal coefficients, neighbors[v] the off-diagonal partners
// of v with their folded coefficients (both directions, sorted by index).
struct Adjacency {
  std::vector<double> linear;
  std::vector<std::vector<std::pair<int, double>>> neighbors;
};

Adjacency build_adjacency(const QuboModel& model);

int free_count(const PartialAssignment& pa);

// Converts a fully fixed partial assignment; throws if any variable is Free.
Assignment to_assignment(const PartialAssignment& pa);

struct FixResult {
  QuboModel reduced;             // model over the free variables, reindexed
  std::vector<int> old_to_new;   // original index -> reduced index, -1 if fixed
  std::vector<int> new_to_old;   // reduced index -> original index
};

// Substitutes fixed variables: constants fold into the offset, bilinear
// terms with one fixed-to-one endpoint fold into linear terms, terms with
// a fixed-to-zero endpoint vanish. Free variables are reindexed to
// 0..free_count-1 preserving order.
FixResult fix_variables(const QuboModel& model, const PartialAssignment& pa);

namespace detail {

// Reusable-buffer form of fix_variables for hot paths. offdiag is sorted by
// (i, j) in reduced indices; linear is dense over the free variables.
struct FixWorkspace {
  std::vector<int> old_to_new;
  std::vector<int> new_to_old;
  std::vector<double> linear;
  std::vector<Term> offdiag;
  double offset = 0.0;
  int n_free = 0;
};

void reduce(const QuboModel& model, const PartialAssignment& pa, FixWorkspace& ws);

}  // namespace detail
}  // namespace qbb
