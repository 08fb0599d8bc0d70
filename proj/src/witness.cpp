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


#include "qbattery/witness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qbattery {
namespace {

constexpr double kPureTolerance = 1e-9;

void check_k(int k, int d) {
  check_local_dim(d);
  if (k < 1 || k > d) {
    throw Error(ErrorKind::out_of_range,
                "Schmidt number k=" + std::to_string(k) + " outside [1, " + std::to_string(d) + "]");
  }
}

bool symmetric_fields(double a, double b) {
  return std::abs(a - b) <= kPureTolerance * std::max(1.0, std::max(a, b));
}

} // namespace

const char *to_string(BoundDirection dir) {
  switch (dir) {
  case BoundDirection::upper: return "upper";
  case BoundDirection::lower: return "lower";
  case BoundDirection::none: return "none";
  }
  return "none";
}

double s_k(int k, int d, double rA2, double rB2) {
  check_k(k, d);
  if (rA2 < 0.0 || rB2 < 0.0) throw Error(ErrorKind::out_of_range, "sector lengths must be >= 0");
  const double kd = static_cast<double>(k) * d;
  return kd - 1.0 + 0.5 * (kd - 2.0) * (rA2 + rB2) - 0.5 * kd * std::abs(rA2 - rB2);
}

double variance_bound(int k, int d, double rA2, double rB2, double hA2, double hB2, double g2v2) {
  const double c = static_cast<double>(d) * d - 1.0;
  return (rA2 * hA2 + rB2 * hB2 + g2v2 * s_k(k, d, rA2, rB2) / c) / c;
}

bool exceeds(double value, double bound, double margin) {
  return value > bound + margin * std::abs(bound);
}

WitnessReport detect_schmidt_number(const DensityMatrix &rho, const BatteryHamiltonian &h) {
  const int d = h.d();
  if (rho.dim() != d * d) throw Error(ErrorKind::dimension_mismatch, "state and Hamiltonian dimensions differ");

  WitnessReport r;
  r.d = d;
  r.sectors = sector_lengths(bloch_decompose(rho, d));
  r.hA2 = h.hA2();
  r.hB2 = h.hB2();
  r.g2v2 = h.g2v2();
  r.variance_used = work_variance_from_scalars(d, r.sectors, r.hA2, r.hB2, r.g2v2);

  for (int k = 1; k <= d; ++k) {
    const double b = variance_bound(k, d, r.sectors.rA2, r.sectors.rB2, r.hA2, r.hB2, r.g2v2);
    r.thresholds.push_back({k, b});
    if (exceeds(r.variance_used, b)) r.detected_sn_lower_bound = k + 1;
  }

  r.purity = purity(rho);
  r.purity_A = purity(partial_trace(rho, Side::A, d));
  r.purity_B = purity(partial_trace(rho, Side::B, d));
  const double min_local = std::min(r.purity_A, r.purity_B);
  for (int k = 1; k <= d; ++k) {
    if (exceeds(r.purity, k * min_local)) r.purity_sn_lower_bound = k + 1;
  }
  r.routes_comparable = r.g2v2 > 0.0;
  r.routes_agree = !r.routes_comparable || r.purity_sn_lower_bound == r.detected_sn_lower_bound;

  r.ppt_min_eig = partial_transpose_min_eig(rho, d);

  if (std::abs(r.purity - 1.0) <= kPureTolerance && symmetric_fields(r.hA2, r.hB2)) {
    r.pure_state_branch = pure_state_bound(rho, h);
  }
  return r;
}

PureStateReport pure_state_bound(const DensityMatrix &rho, const BatteryHamiltonian &h) {
  const int d = h.d();
  if (rho.dim() != d * d) throw Error(ErrorKind::dimension_mismatch, "state and Hamiltonian dimensions differ");
  if (std::abs(purity(rho) - 1.0) > kPureTolerance) {
    throw Error(ErrorKind::non_pure_state, "pure-state bound needs tr[rho^2] = 1");
  }
  if (!symmetric_fields(h.hA2(), h.hB2())) {
    throw Error(ErrorKind::asymmetric_fields, "pure-state bound needs hA2 = hB2");
  }

  const double dd = d;
  const double c = dd * dd - 1.0;
  PureStateReport r;
  r.d = d;
  r.h2 = 0.5 * (h.hA2() + h.hB2());
  r.g2v2 = h.g2v2();
  r.G = r.g2v2 / c - r.h2;
  r.t2 = sector_lengths(bloch_decompose(rho, d)).t2;
  r.variance = r.h2 + r.G * r.t2 / c;
  if (r.G > 0.0) r.direction = BoundDirection::upper;
  else if (r.G < 0.0) r.direction = BoundDirection::lower;

  for (int k = 1; k <= d; ++k) {
    const double t2_max = dd * dd + 1.0 - 2.0 * dd / k;
    r.t2_thresholds.push_back({k, t2_max});
    r.variance_thresholds.push_back({k, r.h2 + r.G * t2_max / c});
    if (exceeds(r.t2, t2_max)) r.detected_sn_lower_bound = k + 1;
  }
  return r;
}

} // namespace qbattery
