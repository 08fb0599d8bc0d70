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


#ifndef QBATTERY_TPM_HPP
#define QBATTERY_TPM_HPP

#include <array>
#include <vector>

#include "qbattery/battery.hpp"

namespace qbattery {

/// f_eps = sqrt(eps + (1 - eps)/d) - sqrt((1 - eps)/d).
double povm_f(double eps, int d);
/// g_eps = sqrt((1 - eps)/d).
double povm_g(double eps, int d);

/// Noisy energy measurement P_i = eps Pi_i + (1 - eps)/d with Luders roots
/// sqrt(P_i) = f Pi_i + g.
struct NoisyPovm {
  Side side = Side::A;
  double epsilon = 1.0;
  double f = 1.0;
  double g = 0.0;
  std::vector<Mat> elements;
  std::vector<Mat> roots;
};

NoisyPovm noisy_povm(const SpectralDecomposition &spec, Side side, double epsilon);

/// Outcome labels e_ij with sum_ij e_ij P_i (x) P_j = H_D. Both efficiencies
/// must lie in (0, 1]; eps = 0 throws divergent_labels.
RMat energy_labels(const SpectralDecomposition &spec, double epsA, double epsB);

/// Exact outcome statistics of one protocol run at fixed (UA, UB).
struct TpmBranches {
  /// m(i, j) = tr[P_i (x) P_j rho].
  RMat m;
  /// cond(i*d + j, k*d + l) = m_{kl|ij}; rows with m_ij = 0 are left zero.
  RMat cond;
  RMat labels;
  /// sum m_ij m_{kl|ij} (e_ij - e_kl).
  double work = 0.0;
};

TpmBranches tpm_branches(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA, double epsB,
                         const Mat &ua, const Mat &ub);

/// Presumed work W_TPM for one unitary pair, by enumeration over all
/// first- and second-measurement outcomes.
/// Finite-shot estimate of branches.work: draws (ij) from m and (kl) from
/// cond, averages e_ij - e_kl. Demonstration only; the exact path is tpm_run.
Moments tpm_shot_sample(const TpmBranches &branches, std::size_t shots, RandomStream &rng);

double tpm_run(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA, double epsB,
               const Mat &ua, const Mat &ub);

WorkStatistics mc_tpm_statistics(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA,
                                 double epsB, std::size_t n, const SamplerConfig &cfg,
                                 Exec exec = Exec::parallel);

struct TpmWeights {
  double epsA = 0.0, epsB = 0.0;
  double fA = 0.0, gA = 0.0, fB = 0.0, gB = 0.0;
  double kappaA = 0.0, kappaB = 0.0, kappaAB = 0.0;
  double gammaA = 0.0, gammaB = 0.0, gammaAB = 0.0;
  double n0 = 0.0, n1 = 0.0, nNoisy = 0.0;
};

TpmWeights tpm_weights(double epsA, double epsB, int d);

struct TpmSpectralStats {
  int d = 0;
  RMat p;
  RVec pA, pB;
  double pAB2 = 0.0, pA2 = 0.0, pB2 = 0.0;
  /// zeta^X_ab = sum_i tr(Pi_i l_a Pi_i l_b) / d.
  RMat zetaA, zetaB;
  SectorLengths sectors;
  /// sum_abc t_ab t_cb zeta^A_ac and sum_abc t_ab t_ac zeta^B_bc.
  double zA = 0.0, zB = 0.0;
  /// sum_abcd t_ab t_cd zeta^A_ac zeta^B_bd.
  double zAB = 0.0;
  /// d^2 pAB2 - d pA2 - d pB2 + 1.
  double qAB = 0.0;
};

TpmSpectralStats tpm_spectral_stats(const DensityMatrix &rho, const SpectralDecomposition &spec);

/// The ten unitary integrals of the variance expansion, each including its
/// weight prefactor. variance = xiAB + xiA + xiB + xiRho + 2 sum(c).
struct TpmXiTerms {
  double xiAB = 0.0, xiA = 0.0, xiB = 0.0, xiRho = 0.0;
  std::array<double, 6> c{};

  double sum() const;
};

struct TpmVarianceReport {
  double upsilonIdeal = 0.0, upsilonProj = 0.0, upsilonNoisy = 0.0;
  double varTPM = 0.0;
  double meanTPM = 0.0;
  /// Haar work variance of H_D.
  double varD = 0.0;
  /// upsilonProj / n1 and upsilonNoisy / nNoisy; zero where the weight vanishes.
  double varProj = 0.0, varNoisy = 0.0;
  TpmWeights weights;
  TpmXiTerms xi;
};

/// Closed-form unitary-averaged mean and variance of W_TPM. Accepts
/// eps in [0, 1]; the constant part of H_D never enters.
TpmVarianceReport tpm_variance_closed_form(const DensityMatrix &rho, const SpectralDecomposition &spec,
                                           double epsA, double epsB);

} // namespace qbattery

#endif // QBATTERY_TPM_HPP
