// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "qbb/qubo.hpp"

namespace qbb {

// Ising form: minimize offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j over
// s in {-1,+1}^n. fields is dense (zeros included); couplers are sorted by
// (i, j) with i < j and zero entries dropped.
struct IsingModel {
  int n = 0;
  std::vector<double> fields;
  std::vector<Term> couplers;
  double offset = 0.0;
};

// Variable change x_i = (1 + s_i) / 2 and its inverse. Round-tripping a
// model reproduces every coefficient up to cancellation noise (< 1e-12
// for desk-scale magnitudes).
IsingModel to_ising(const QuboModel& model);
QuboModel from_ising(const IsingModel& ising);

// Energy of a spin vector (entries must be -1 or +1); mirror of evaluate.
double ising_energy(const IsingModel& ising, const std::vector<int>& spins);

}  // namespace qbb
