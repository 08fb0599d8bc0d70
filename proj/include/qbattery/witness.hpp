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


#ifndef QBATTERY_WITNESS_HPP
#define QBATTERY_WITNESS_HPP

#include <optional>
#include <vector>

#include "qbattery/battery.hpp"

namespace qbattery {

/// Relative margin a variance must clear before a bound counts as violated.
inline constexpr double kDetectionMargin = 1e-9;

/// s_k = kd - 1 + ((kd - 2)/2)(rA2 + rB2) - (kd/2)|rA2 - rB2|, the largest t2
/// reachable with Schmidt number k at fixed local sector lengths.
double s_k(int k, int d, double rA2, double rB2);

/// Largest work variance compatible with Schmidt number k.
double variance_bound(int k, int d, double rA2, double rB2, double hA2, double hB2, double g2v2);

/// True when `value` exceeds `bound` by more than the relative margin.
bool exceeds(double value, double bound, double margin = kDetectionMargin);

struct Threshold {
  int k = 0;
  double bound = 0.0;
};

enum class BoundDirection { upper, lower, none };

const char *to_string(BoundDirection dir);

/// Pure-state specialization with symmetric local fields (hA2 = hB2 = h2).
struct PureStateReport {
  int d = 0;
  double h2 = 0.0;
  double g2v2 = 0.0;
  /// G = g2v2/(d^2 - 1) - h2.
  double G = 0.0;
  double t2 = 0.0;
  double variance = 0.0;
  /// Schmidt number k allows t2 <= d^2 + 1 - 2d/k.
  std::vector<Threshold> t2_thresholds;
  /// Variance at each t2 threshold. For G > 0 these cap the variance of
  /// Schmidt-number-k states from above, for G < 0 from below.
  std::vector<Threshold> variance_thresholds;
  BoundDirection direction = BoundDirection::none;
  int detected_sn_lower_bound = 1;
};

struct WitnessReport {
  int d = 0;
  double variance_used = 0.0;
  SectorLengths sectors;
  double hA2 = 0.0, hB2 = 0.0, g2v2 = 0.0;
  /// variance_bound for k = 1..d.
  std::vector<Threshold> thresholds;
  int detected_sn_lower_bound = 1;

  /// Purity route: Schmidt number k requires tr[rho^2] <= k min(tr rhoA^2, tr rhoB^2).
  double purity = 0.0, purity_A = 0.0, purity_B = 0.0;
  int purity_sn_lower_bound = 1;
  /// The two routes are the same inequality whenever g2v2 > 0.
  bool routes_comparable = false;
  bool routes_agree = true;

  /// Reported for comparison only; never merged into the Schmidt-number bound.
  double ppt_min_eig = 0.0;

  std::optional<PureStateReport> pure_state_branch;
};

WitnessReport detect_schmidt_number(const DensityMatrix &rho, const BatteryHamiltonian &h);

/// Throws non_pure_state unless purity is 1 within 1e-9 and asymmetric_fields
/// unless hA2 = hB2 within 1e-9 (relative).
PureStateReport pure_state_bound(const DensityMatrix &rho, const BatteryHamiltonian &h);

} // namespace qbattery

#endif // QBATTERY_WITNESS_HPP
