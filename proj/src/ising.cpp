// SPDX-License-Identifier: Apache-2.0
#include "qbb/ising.hpp"

#include <stdexcept>
#include <string>

namespace qbb {

IsingModel to_ising(const QuboModel& model) {
  IsingModel out;
  out.n = model.num_vars();
  out.fields.assign(out.n, 0.0);
  out.offset = model.offset();
  out.couplers.reserve(model.num_terms());
  // x_i = (1 + s_i) / 2:
  //   c x_i       -> c/2 s_i + c/2
  //   c x_i x_j   -> c/4 s_i s_j + c/4 s_i + c/4 s_j + c/4
  for (const Term& t : model.terms()) {
    if (t.i == t.j) {
      out.fields[t.i] += t.coef / 2.0;
      out.offset += t.coef / 2.0;
    } else {
      out.couplers.push_back({t.i, t.j, t.coef / 4.0});
      out.fields[t.i] += t.coef / 4.0;
      out.fields[t.j] += t.coef / 4.0;
      out.offset += t.coef / 4.0;
    }
  }
  return out;
}

QuboModel from_ising(const IsingModel& ising) {
  if (static_cast<int>(ising.fields.size()) != ising.n) {
    throw std::invalid_argument("from_ising: fields length does not match n");
  }
  // s_i = 2 x_i - 1:
  //   h s_i       -> 2h x_i - h
  //   J s_i s_j   -> 4J x_i x_j - 2J x_i - 2J x_j + J
  std::vector<Term> terms;
  terms.reserve(ising.couplers.size() * 3 + ising.fields.size());
  double offset = ising.offset;
  for (int v = 0; v < ising.n; ++v) {
    terms.push_back({v, v, 2.0 * ising.fields[v]});
    offset -= ising.fields[v];
  }
  for (const Term& c : ising.couplers) {
    if (c.i == c.j) throw std::invalid_argument("from_ising: self-coupler");
    terms.push_back({c.i, c.j, 4.0 * c.coef});
    terms.push_back({c.i, c.i, -2.0 * c.coef});
    terms.push_back({c.j, c.j, -2.0 * c.coef});
    offset += c.coef;
  }
  return QuboModel(ising.n, std::move(terms), offset);
}

double ising_energy(const IsingModel& ising, const std::vector<int>& spins) {
  if (static_cast<int>(spins.size()) != ising.n) {
    throw std::invalid_argument("ising_energy: spin vector length mismatch");
  }
  for (int s : spins) {
    if (s != -1 && s != 1) throw std::invalid_argument("ising_energy: spins must be +-1");
  }
  double acc = ising.offset;
  for (int v = 0; v < ising.n; ++v) acc += ising.fields[v] * spins[v];
  for (const Term& c : ising.couplers) acc += c.coef * spins[c.i] * spins[c.j];
  return acc;
}

}  // namespace qbb
