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

#ifndef QBATTERY_BATTERY_HPP
#define QBATTERY_BATTERY_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qbattery/bloch.hpp"
#include "qbattery/linalg.hpp"
#include "qbattery/random.hpp"
#include "qbattery/stats.hpp"

namespace qbattery {

/// H_AB = H_A (x) 1 + 1 (x) H_B + g V on a d x d system.
///
/// The interaction is stored in canonical form: tr_A V = tr_B V = 0. Local
/// parts of a user-supplied V are folded into H_A and H_B and its trace part
/// is dropped (work is invariant under constant shifts). The sector scalars
/// hA2, hB2 and v2 exclude identity components, so they are shift invariant.
class BatteryHamiltonian {
public:
  static BatteryHamiltonian from_parts(const Mat &h_a, const Mat &h_b, const Mat &v, double g);

  int d() const { return d_; }
  const Mat &HA() const { return ha_; }
  const Mat &HB() const { return hb_; }
  const Mat &V() const { return v_; }
  double g() const { return g_; }

  /// Full d^2 x d^2 Hamiltonian.
  const Mat &full() const { return full_; }

  const RVec &hA() const { return hA_coef_; }
  const RVec &hB() const { return hB_coef_; }
  const RMat &v() const { return v_coef_; }
  double hA2() const { return hA_coef_.squaredNorm(); }
  double hB2() const { return hB_coef_.squaredNorm(); }
  double v2() const { return v_coef_.squaredNorm(); }
  double g2v2() const { return g_ * g_ * v2(); }

  /// Constant g tr[V] / d^2 removed from the supplied interaction.
  double dropped_constant() const { return dropped_constant_; }

private:
  BatteryHamiltonian() = default;

  int d_ = 0;
  Mat ha_, hb_, v_, full_;
  double g_ = 0.0;
  RVec hA_coef_, hB_coef_;
  RMat v_coef_;
  double dropped_constant_ = 0.0;
};

/// V with its local parts and trace removed, so tr_A V = tr_B V = 0.
Mat canonical_interaction(const Mat &v, int d);

/// Four-qubit Ising chain split as (1,2 | 3,4):
///   H_A = J1 Z Z + b (Z 1 + 1 Z),  H_B = J3 Z Z + b (Z 1 + 1 Z),
///   g V = J2 (1 Z)_A (x) (Z 1)_B.
BatteryHamiltonian ising_battery(double J1, double J2, double J3, double b);

/// exp(-H/T) / Z.
DensityMatrix gibbs_state(const Mat &h, double temperature);

/// alpha |phi><phi| + (1 - alpha) tauA (x) tauB, where
/// |phi> = sum_i sqrt(p_i) |e_i>|f_i> pairs the eigenvectors of tauA and tauB
/// in descending-eigenvalue order, so both marginals are preserved.
DensityMatrix thermal_mixture_state(double alpha, const DensityMatrix &tau_a, const DensityMatrix &tau_b);

/// Pure state sum_i sqrt(p_i) |e_i>|f_i> used by thermal_mixture_state.
CVec thermal_purification(const DensityMatrix &tau_a, const DensityMatrix &tau_b);

/// W = tr[(rho - U rho U^dagger) H_AB] with U = UA (x) UB.
double work(const DensityMatrix &rho, const BatteryHamiltonian &h, const Mat &ua, const Mat &ub);

struct WorkStatistics {
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t n_samples = 0;
  double se_mean = 0.0;
  double se_variance = 0.0;
};

/// E - tr[H_AB] / d^2.
double analytic_work_mean(const DensityMatrix &rho, const BatteryHamiltonian &h);

/// Haar-averaged work variance
///   (rA2 hA2 + rB2 hB2 + t2 g^2 v2 / (d^2 - 1)) / (d^2 - 1),
/// returned with n_samples = 0 and zero standard errors.
WorkStatistics analytic_work_variance(const DensityMatrix &rho, const BatteryHamiltonian &h);

double work_variance_from_scalars(int d, const SectorLengths &s, double hA2, double hB2, double g2v2);

/// Sample mean and variance of W over n independent Haar pairs (UA, UB).
/// Requires cfg.d == h.d() and n >= 2.
WorkStatistics mc_work_statistics(const DensityMatrix &rho, const BatteryHamiltonian &h, std::size_t n,
                                  const SamplerConfig &cfg, Exec exec = Exec::parallel);

struct WorkHistogram {
  double bin_width = 0.0;
  /// Left edge of counts[0]; always an integer multiple of bin_width.
  double origin = 0.0;
  std::vector<std::uint64_t> counts;
  std::uint64_t n_samples = 0;
  Moments moments;
};

WorkHistogram work_histogram(const DensityMatrix &rho, const BatteryHamiltonian &h, std::size_t n,
                             double bin_width, const SamplerConfig &cfg, Exec exec = Exec::parallel);

/// Local energy eigenbases and the split V = sum_ij D_ij Pi_i (x) Pi_j + V_od.
struct SpectralDecomposition {
  int d = 0;
  double g = 0.0;
  RVec EA, EB;
  /// Columns are the eigenvectors behind the rank-1 projectors.
  Mat basisA, basisB;
  std::vector<Mat> PiA, PiB;
  RMat D;
  Mat Vod;
  RMat Eij;
  Mat HD;
  double trHA = 0.0, trHB = 0.0;
  /// Sector scalars of H_D; hA2 and hB2 coincide with those of H_AB.
  double hA2 = 0.0, hB2 = 0.0, g2v2_diag = 0.0;
};

SpectralDecomposition spectral_decomposition(const BatteryHamiltonian &h);

} // namespace qbattery

#endif // QBATTERY_BATTERY_HPP
