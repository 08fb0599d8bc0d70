// Copyright 2026 The qbattery Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QBATTERY_BLOCH_HPP
#define QBATTERY_BLOCH_HPP

#include "qbattery/linalg.hpp"

namespace qbattery {

/// Generalized Bloch coordinates of a bipartite d x d state,
///
///   rho = (1 + sum_i rA_i l_i(x)1 + sum_i rB_i 1(x)l_i + sum_ij t_ij l_i(x)l_j) / d^2,
///
/// with rA_i = tr[rho (l_i (x) 1)], rB_i = tr[rho (1 (x) l_i)] and
/// t_ij = tr[rho (l_i (x) l_j)] for the basis of gell_mann_basis(d).
struct BlochForm {
  int d = 0;
  RVec rA;
  RVec rB;
  RMat t;
  double rA2 = 0.0;
  double rB2 = 0.0;
  double t2 = 0.0;
};

/// Local-unitary invariant sector lengths (rA2, rB2, t2).
struct SectorLengths {
  double rA2 = 0.0;
  double rB2 = 0.0;
  double t2 = 0.0;
};

BlochForm bloch_decompose(const DensityMatrix &rho, int d);
BlochForm bloch_decompose(const DensityMatrix &rho, const HermitianBasis &basis);

/// Inverse of bloch_decompose.
Mat bloch_reconstruct(const BlochForm &form);
Mat bloch_reconstruct(const BlochForm &form, const HermitianBasis &basis);

/// tr[rho^2] = (1 + rA2 + rB2 + t2) / d^2.
double purity_from_bloch(const BlochForm &form);

SectorLengths sector_lengths(const BlochForm &form);

/// Sector lengths from purities alone, without a basis expansion.
SectorLengths sector_lengths_from_purities(const DensityMatrix &rho, int d);

/// h_i = tr[h l_i] / d for i >= 1; the identity component is dropped.
RVec local_coefficients(const Mat &h, const HermitianBasis &basis);

/// v_ij = tr[v (l_i (x) l_j)] / d^2 for i, j >= 1.
RMat correlation_coefficients(const Mat &v, const HermitianBasis &basis);

} // namespace qbattery

#endif // QBATTERY_BLOCH_HPP
