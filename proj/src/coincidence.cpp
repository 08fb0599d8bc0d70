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


#include "qbattery/coincidence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qbattery {
namespace {

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw Error(ErrorKind::out_of_range, "measurement efficiency must lie in [0, 1], got " + std::to_string(eps));
  }
}

void require_state(const DensityMatrix &rho, const SpectralDecomposition &spec) {
  if (rho.dim() != spec.d * spec.d) {
    throw Error(ErrorKind::dimension_mismatch, "state and Hamiltonian dimensions differ");
  }
}

// tr[(P_AA' (x) P_BB')(rho' (x) rho')] = sum_ij m_ij^2 with
// m_ij = tr[P_i (x) P_j rho'], since P_XX' = sum_i P_i (x) P_i.
class CoincidenceKernel {
public:
  CoincidenceKernel(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA, double epsB)
      : d_(spec.d), basis_(kron(spec.basisA, spec.basisB)) {
    check_eps(epsA);
    check_eps(epsB);
    rho_eig_ = basis_.adjoint() * rho.matrix() * basis_;
    const int n = d_ * d_;
    povm_.resize(n, n);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j)
        for (int a = 0; a < d_; ++a)
          for (int b = 0; b < d_; ++b)
            povm_(i * d_ + j, a * d_ + b) =
                (epsA * (a == i) + (1.0 - epsA) / d_) * (epsB * (b == j) + (1.0 - epsB) / d_);
  }

  double operator()(const Mat &ua, const Mat &ub) {
    u_eig_.noalias() = basis_.adjoint() * kron(ua, ub) * basis_;
    tmp_.noalias() = u_eig_ * rho_eig_;
    const RVec diag = (tmp_.cwiseProduct(u_eig_.conjugate())).rowwise().sum().real();
    return (povm_ * diag).squaredNorm();
  }

private:
  int d_;
  Mat basis_;
  Mat rho_eig_;
  RMat povm_;
  Mat u_eig_, tmp_;
};

} // namespace

Mat coincidence_povm(const SpectralDecomposition &spec, Side side, double epsilon) {
  check_eps(epsilon);
  const int d = spec.d;
  const std::vector<Mat> &pis = side == Side::A ? spec.PiA : spec.PiB;
  Mat pi2 = Mat::Zero(d * d, d * d);
  for (const Mat &pi : pis) pi2 += kron(pi, pi);
  return epsilon * epsilon * pi2 + ((1.0 - epsilon * epsilon) / d) * identity(d * d);
}

double avg_coincidence_closed(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA,
                              double epsB) {
  require_state(rho, spec);
  check_eps(epsA);
  check_eps(epsB);
  const double d = spec.d;
  const SectorLengths s = sector_lengths(bloch_decompose(rho, spec.d));
  const double a2 = epsA * epsA, b2 = epsB * epsB;
  return (1.0 + s.rA2 * a2 / (d + 1.0) + s.rB2 * b2 / (d + 1.0) + s.t2 * a2 * b2 / ((d + 1.0) * (d + 1.0))) /
         (d * d);
}

double coincidence_probability(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA,
                               double epsB, const Mat &ua, const Mat &ub) {
  require_state(rho, spec);
  CoincidenceKernel kernel(rho, spec, epsA, epsB);
  return kernel(ua, ub);
}

CoincidenceEstimate mc_coincidence(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA,
                                   double epsB, std::size_t n, const SamplerConfig &cfg, Exec exec) {
  require_state(rho, spec);
  if (n < 2) throw Error(ErrorKind::invalid_sample_count, "need at least two samples");
  if (cfg.d != spec.d) throw Error(ErrorKind::dimension_mismatch, "sampler dimension differs from battery");
  const CoincidenceKernel proto(rho, spec, epsA, epsB);

  const Moments m = run_blocks<Moments>(n, exec, [&](std::uint32_t block, std::size_t count) {
    HaarSampler sampler(cfg, block);
    CoincidenceKernel kernel = proto;
    Moments acc;
    Mat ua(spec.d, spec.d), ub(spec.d, spec.d);
    for (std::size_t s = 0; s < count; ++s) {
      sampler.next(ua);
      sampler.next(ub);
      acc.add(kernel(ua, ub));
    }
    return acc;
  });
  return {m.mean(), m.se_mean(), m.count()};
}

CoincidenceReport obs4_bound(const DensityMatrix &rho, const BatteryHamiltonian &h,
                             const SpectralDecomposition &spec, double epsilon) {
  require_state(rho, spec);
  if (spec.d != h.d()) throw Error(ErrorKind::dimension_mismatch, "spectral data belongs to another battery");
  check_eps(epsilon);
  const double d = h.d();
  CoincidenceReport r;
  r.epsA = r.epsB = epsilon;
  r.h2_min = std::min(h.hA2(), h.hB2());
  if (!(r.h2_min > 0.0)) {
    throw Error(ErrorKind::undefined_bound, "coincidence bound needs nonzero local fields (min(hA2, hB2) > 0)");
  }
  const double e2 = epsilon * epsilon;
  r.c_term = h.g2v2() / (d - 1.0) - r.h2_min * e2;
  r.variance = analytic_work_variance(rho, h).variance;
  r.t2 = sector_lengths(bloch_decompose(rho, h.d())).t2;
  r.cbar_closed = avg_coincidence_closed(rho, spec, epsilon, epsilon);
  r.obs4_lhs = r.cbar_closed;
  r.obs4_rhs = (1.0 + (d - 1.0) * e2 / r.h2_min * r.variance +
                r.t2 * e2 * (std::abs(r.c_term) - r.c_term) / (2.0 * (d + 1.0) * (d + 1.0) * r.h2_min)) /
               (d * d);
  r.holds = r.obs4_lhs <= r.obs4_rhs + 1e-12;
  return r;
}

} // namespace qbattery
