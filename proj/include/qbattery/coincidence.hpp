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


#ifndef QBATTERY_COINCIDENCE_HPP
#define QBATTERY_COINCIDENCE_HPP

#include <optional>

#include "qbattery/battery.hpp"

namespace qbattery {

/// P_XX' = eps^2 sum_i Pi_i (x) Pi_i + (1 - eps^2)/d on the local space of
/// two copies (X first, X' second).
Mat coincidence_povm(const SpectralDecomposition &spec, Side side, double epsilon);

/// Haar average of the two-copy coincidence probability,
/// (1 + rA2 epsA^2/(d+1) + rB2 epsB^2/(d+1) + t2 epsA^2 epsB^2/(d+1)^2) / d^2.
double avg_coincidence_closed(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA, double epsB);

struct CoincidenceEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::uint64_t n_samples = 0;
};

/// Sample mean of tr[(P_AA' (x) P_BB') (rho' (x) rho')] with one unitary pair
/// shared by both copies.
CoincidenceEstimate mc_coincidence(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA,
                                   double epsB, std::size_t n, const SamplerConfig &cfg,
                                   Exec exec = Exec::parallel);

/// Coincidence probability for one unitary pair.
double coincidence_probability(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA,
                               double epsB, const Mat &ua, const Mat &ub);

struct CoincidenceReport {
  double epsA = 0.0, epsB = 0.0;
  double cbar_closed = 0.0;
  std::optional<CoincidenceEstimate> cbar_mc;
  double variance = 0.0;
  double obs4_lhs = 0.0, obs4_rhs = 0.0;
  double c_term = 0.0;
  double h2_min = 0.0;
  double t2 = 0.0;
  bool holds = true;
};

/// Bounds the symmetric-efficiency coincidence by the work variance, with c
/// defined through g2v2 = (d - 1)(h2 eps^2 + c) and h2 = min(hA2, hB2).
/// Throws undefined_bound when h2 = 0.
CoincidenceReport obs4_bound(const DensityMatrix &rho, const BatteryHamiltonian &h,
                             const SpectralDecomposition &spec, double epsilon);

} // namespace qbattery

#endif // QBATTERY_COINCIDENCE_HPP
