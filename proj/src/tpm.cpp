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


#include "qbattery/tpm.hpp"

#include <cmath>
#include <string>

namespace qbattery {
namespace {

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw Error(ErrorKind::out_of_range, "measurement efficiency must lie in [0, 1], got " + std::to_string(eps));
  }
}

void check_label_eps(double eps) {
  check_eps(eps);
  if (eps == 0.0) throw Error(ErrorKind::divergent_labels, "energy labels diverge at zero efficiency");
}

void require_state(const DensityMatrix &rho, const SpectralDecomposition &spec) {
  if (rho.dim() != spec.d * spec.d) {
    throw Error(ErrorKind::dimension_mismatch, "state and Hamiltonian dimensions differ");
  }
}

// Everything below works in the product eigenbasis |e_i f_j>, where all POVM
// elements and Luders roots are diagonal.
class TpmKernel {
public:
  TpmKernel(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA, double epsB)
      : d_(spec.d), basis_(kron(spec.basisA, spec.basisB)), labels_(energy_labels(spec, epsA, epsB)) {
    const int n = d_ * d_;
    rho_eig_ = basis_.adjoint() * rho.matrix() * basis_;
    const double fA = povm_f(epsA, d_), gA = povm_g(epsA, d_);
    const double fB = povm_f(epsB, d_), gB = povm_g(epsB, d_);
    povm_.resize(n, n);
    roots_.resize(n, n);
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) {
        for (int a = 0; a < d_; ++a) {
          for (int b = 0; b < d_; ++b) {
            const double pa = epsA * (a == i) + (1.0 - epsA) / d_;
            const double pb = epsB * (b == j) + (1.0 - epsB) / d_;
            povm_(i * d_ + j, a * d_ + b) = pa * pb;
            roots_(i * d_ + j, a * d_ + b) = (fA * (a == i) + gA) * (fB * (b == j) + gB);
          }
        }
      }
    }
    const RVec diag = rho_eig_.diagonal().real();
    m_ = povm_ * diag;
    for (int ij = 0; ij < n; ++ij) {
      const RVec k = roots_.row(ij).transpose();
      branches_.push_back(k.cast<cplx>().asDiagonal() * rho_eig_ * k.cast<cplx>().asDiagonal());
    }
    sigma_total_ = Mat::Zero(n, n);
    for (const Mat &s : branches_) sigma_total_ += s;
    first_ = 0.0;
    for (int ij = 0; ij < n; ++ij) first_ += m_(ij) * labels_(ij / d_, ij % d_);
  }

  int d() const { return d_; }
  const RVec &m() const { return m_; }
  const RMat &labels() const { return labels_; }

  // Joint probabilities m_ij m_{kl|ij}; row ij, column kl.
  RMat joint(const Mat &ua, const Mat &ub) {
    const int n = d_ * d_;
    rotate(ua, ub);
    RMat out = RMat::Zero(n, n);
    for (int ij = 0; ij < n; ++ij) {
      if (m_(ij) == 0.0) continue;
      out.row(ij) = (povm_ * rotated_diag(branches_[static_cast<std::size_t>(ij)])).transpose();
    }
    return out;
  }

  // The second-measurement term is linear in the branch states, so summing
  // them first gives the same enumeration at the cost of one branch.
  double work(const Mat &ua, const Mat &ub) {
    rotate(ua, ub);
    const RVec q = povm_ * rotated_diag(sigma_total_);
    double second = 0.0;
    for (int kl = 0; kl < d_ * d_; ++kl) second += q(kl) * labels_(kl / d_, kl % d_);
    return first_ - second;
  }

private:
  void rotate(const Mat &ua, const Mat &ub) {
    u_.noalias() = kron(ua, ub) * basis_;
    u_eig_.noalias() = basis_.adjoint() * u_;
  }

  // diag(U s U^dagger) in the eigenbasis.
  RVec rotated_diag(const Mat &s) {
    tmp_.noalias() = u_eig_ * s;
    return (tmp_.cwiseProduct(u_eig_.conjugate())).rowwise().sum().real();
  }

  int d_;
  Mat basis_;
  RMat labels_;
  Mat rho_eig_;
  RMat povm_, roots_;
  RVec m_;
  std::vector<Mat> branches_;
  Mat sigma_total_;
  double first_ = 0.0;
  Mat u_, u_eig_, tmp_;
};

} // namespace

double povm_f(double eps, int d) {
  check_eps(eps);
  return std::sqrt(eps + (1.0 - eps) / d) - std::sqrt((1.0 - eps) / d);
}

double povm_g(double eps, int d) {
  check_eps(eps);
  return std::sqrt((1.0 - eps) / d);
}

NoisyPovm noisy_povm(const SpectralDecomposition &spec, Side side, double epsilon) {
  check_eps(epsilon);
  const int d = spec.d;
  NoisyPovm p;
  p.side = side;
  p.epsilon = epsilon;
  p.f = povm_f(epsilon, d);
  p.g = povm_g(epsilon, d);
  const std::vector<Mat> &pis = side == Side::A ? spec.PiA : spec.PiB;
  const Mat id = identity(d);
  for (const Mat &pi : pis) {
    p.elements.push_back(epsilon * pi + ((1.0 - epsilon) / d) * id);
    p.roots.push_back(p.f * pi + p.g * id);
  }
  return p;
}

RMat energy_labels(const SpectralDecomposition &spec, double epsA, double epsB) {
  check_label_eps(epsA);
  check_label_eps(epsB);
  const int d = spec.d;
  const double shift = (1.0 - epsA) / (d * epsA) * spec.trHA + (1.0 - epsB) / (d * epsB) * spec.trHB;
  RMat e(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      e(i, j) = spec.EA(i) / epsA + spec.EB(j) / epsB + spec.g * spec.D(i, j) / (epsA * epsB) - shift;
  return e;
}

TpmBranches tpm_branches(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA, double epsB,
                         const Mat &ua, const Mat &ub) {
  require_state(rho, spec);
  const int d = spec.d;
  const int n = d * d;
  TpmKernel kernel(rho, spec, epsA, epsB);
  const RMat joint = kernel.joint(ua, ub);

  TpmBranches out;
  out.labels = kernel.labels();
  out.m.resize(d, d);
  out.cond = RMat::Zero(n, n);
  for (int ij = 0; ij < n; ++ij) {
    const double mij = kernel.m()(ij);
    out.m(ij / d, ij % d) = mij;
    if (mij == 0.0) continue;
    out.cond.row(ij) = joint.row(ij) / mij;
    for (int kl = 0; kl < n; ++kl) {
      out.work += joint(ij, kl) * (out.labels(ij / d, ij % d) - out.labels(kl / d, kl % d));
    }
  }
  return out;
}

Moments tpm_shot_sample(const TpmBranches &branches, std::size_t shots, RandomStream &rng) {
  const auto d = branches.m.rows();
  const auto n = d * d;
  auto draw = [&rng, n](auto &&weight) {
    double u = rng.uniform();
    Eigen::Index last = 0;
    for (Eigen::Index x = 0; x < n; ++x) {
      const double w = weight(x);
      if (w <= 0.0) continue;
      last = x;
      u -= w;
      if (u <= 0.0) return x;
    }
    return last; // rounding leftovers land on the last live outcome
  };
  Moments acc;
  for (std::size_t s = 0; s < shots; ++s) {
    const Eigen::Index ij = draw([&](Eigen::Index x) { return branches.m(x / d, x % d); });
    const Eigen::Index kl = draw([&](Eigen::Index x) { return branches.cond(ij, x); });
    acc.add(branches.labels(ij / d, ij % d) - branches.labels(kl / d, kl % d));
  }
  return acc;
}

double tpm_run(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA, double epsB,
               const Mat &ua, const Mat &ub) {
  return tpm_branches(rho, spec, epsA, epsB, ua, ub).work;
}

WorkStatistics mc_tpm_statistics(const DensityMatrix &rho, const SpectralDecomposition &spec, double epsA,
                                 double epsB, std::size_t n, const SamplerConfig &cfg, Exec exec) {
  require_state(rho, spec);
  if (n < 2) throw Error(ErrorKind::invalid_sample_count, "need at least two samples");
  if (cfg.d != spec.d) throw Error(ErrorKind::dimension_mismatch, "sampler dimension differs from battery");
  // Validates the efficiencies before any worker starts.
  const TpmKernel proto(rho, spec, epsA, epsB);

  const Moments m = run_blocks<Moments>(n, exec, [&](std::uint32_t block, std::size_t count) {
    HaarSampler sampler(cfg, block);
    TpmKernel kernel = proto;
    Moments acc;
    Mat ua(spec.d, spec.d), ub(spec.d, spec.d);
    for (std::size_t s = 0; s < count; ++s) {
      sampler.next(ua);
      sampler.next(ub);
      acc.add(kernel.work(ua, ub));
    }
    return acc;
  });
  return {m.mean(), m.variance(), m.count(), m.se_mean(), m.se_variance()};
}

TpmWeights tpm_weights(double epsA, double epsB, int d) {
  check_local_dim(d);
  TpmWeights w;
  w.epsA = epsA;
  w.epsB = epsB;
  w.fA = povm_f(epsA, d);
  w.gA = povm_g(epsA, d);
  w.fB = povm_f(epsB, d);
  w.gB = povm_g(epsB, d);
  // g(2f + dg) = 1 - f^2 by normalization; this form is exact at eps = 0 and 1.
  const double cA = 1.0 - w.fA * w.fA;
  const double cB = 1.0 - w.fB * w.fB;
  const double F = w.fA * w.fA * w.fB * w.fB;
  w.kappaA = w.fA * w.fA * cB;
  w.kappaB = w.fB * w.fB * cA;
  // kappaA kappaB / F written without the division, which is 0/0 at eps = 0.
  w.kappaAB = cA * cB;
  const double ksum = w.kappaA + w.kappaB + w.kappaAB;
  w.gammaA = F * ksum + w.kappaA * (w.kappaB + w.kappaAB);
  w.gammaB = F * ksum + w.kappaB * (w.kappaA + w.kappaAB);
  w.gammaAB = F * ksum + w.kappaA * w.kappaB;
  w.n0 = w.kappaAB * w.kappaAB;
  w.n1 = F * F + w.kappaA * w.kappaA + w.kappaB * w.kappaB;
  w.nNoisy = 2.0 * (F * ksum + w.kappaA * w.kappaB + w.kappaA * w.kappaAB + w.kappaB * w.kappaAB);
  return w;
}

TpmSpectralStats tpm_spectral_stats(const DensityMatrix &rho, const SpectralDecomposition &spec) {
  require_state(rho, spec);
  const int d = spec.d;
  const HermitianBasis basis = gell_mann_basis(d);
  const auto nb = static_cast<Eigen::Index>(basis.size());

  TpmSpectralStats s;
  s.d = d;
  const Mat b = kron(spec.basisA, spec.basisB);
  const RVec diag = (b.adjoint() * rho.matrix() * b).diagonal().real();
  s.p.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s.p(i, j) = diag(i * d + j);
  s.pA = s.p.rowwise().sum();
  s.pB = s.p.colwise().sum().transpose();
  s.pAB2 = s.p.squaredNorm();
  s.pA2 = s.pA.squaredNorm();
  s.pB2 = s.pB.squaredNorm();
  s.qAB = d * d * s.pAB2 - d * s.pA2 - d * s.pB2 + 1.0;

  auto zeta = [&](const Mat &vecs) {
    RMat z = RMat::Zero(nb, nb);
    for (int i = 0; i < d; ++i) {
      RVec a(nb);
      for (Eigen::Index k = 0; k < nb; ++k) {
        a(k) = (vecs.col(i).adjoint() * basis[static_cast<std::size_t>(k)] * vecs.col(i))(0, 0).real();
      }
      z += a * a.transpose();
    }
    return RMat(z / d);
  };
  s.zetaA = zeta(spec.basisA);
  s.zetaB = zeta(spec.basisB);

  const BlochForm form = bloch_decompose(rho, basis);
  s.sectors = sector_lengths(form);
  const RMat &t = form.t;
  s.zA = s.zetaA.cwiseProduct(t * t.transpose()).sum();
  s.zB = s.zetaB.cwiseProduct(t.transpose() * t).sum();
  s.zAB = t.cwiseProduct(s.zetaA * t * s.zetaB).sum();
  return s;
}

double TpmXiTerms::sum() const {
  double cs = 0.0;
  for (double x : c) cs += x;
  return xiAB + xiA + xiB + xiRho + 2.0 * cs;
}

TpmVarianceReport tpm_variance_closed_form(const DensityMatrix &rho, const SpectralDecomposition &spec,
                                           double epsA, double epsB) {
  require_state(rho, spec);
  const int d = spec.d;
  const double c = static_cast<double>(d) * d - 1.0;
  const TpmSpectralStats st = tpm_spectral_stats(rho, spec);
  const TpmWeights w = tpm_weights(epsA, epsB, d);
  const double rA2 = st.sectors.rA2, rB2 = st.sectors.rB2;
  const double hA2 = spec.hA2, hB2 = spec.hB2, gv = spec.g2v2_diag / c;
  const double qA = d * st.pA2 - 1.0, qB = d * st.pB2 - 1.0;
  const double F = w.fA * w.fA * w.fB * w.fB;
  const double kA = w.kappaA, kB = w.kappaB, kAB = w.kappaAB;

  TpmVarianceReport r;
  r.weights = w;
  r.varD = work_variance_from_scalars(d, st.sectors, hA2, hB2, spec.g2v2_diag);

  const Mat &hd = spec.HD;
  r.meanTPM = (rho.matrix() * hd).trace().real() - hd.trace().real() / (d * d);

  r.upsilonIdeal = kAB * kAB * r.varD;
  r.upsilonProj = (((F * F + kA * kA) * qA + kB * kB * rA2) * hA2 + ((F * F + kB * kB) * qB + kA * kA * rB2) * hB2 +
                   gv * (F * F * st.qAB + kA * kA * st.zA + kB * kB * st.zB)) /
                  c;
  // The zeta contractions carry the interaction factor like every other
  // correlation term; compare the xi cross terms c5 and c6 below.
  r.upsilonNoisy = 2.0 *
                   ((w.gammaA * qA + kB * kAB * rA2) * hA2 + (w.gammaB * qB + kA * kAB * rB2) * hB2 +
                    gv * (w.gammaAB * st.qAB + kA * kAB * st.zA + kB * kAB * st.zB)) /
                   c;
  r.varTPM = r.upsilonIdeal + r.upsilonProj + r.upsilonNoisy;
  r.varProj = w.n1 > 0.0 ? r.upsilonProj / w.n1 : 0.0;
  r.varNoisy = w.nNoisy > 0.0 ? r.upsilonNoisy / w.nNoisy : 0.0;

  const double full = qA * hA2 + qB * hB2 + gv * st.qAB;
  const double partA = qA * hA2 + rB2 * hB2 + gv * st.zA;
  const double partB = rA2 * hA2 + qB * hB2 + gv * st.zB;
  r.xi.xiAB = F * F * full / c;
  r.xi.xiA = kA * kA * partA / c;
  r.xi.xiB = kB * kB * partB / c;
  r.xi.xiRho = kAB * kAB * r.varD;
  r.xi.c = {F * kA * full / c, F * kB * full / c, kA * kB * full / c,
            F * kAB * full / c, kA * kAB * partA / c, kB * kAB * partB / c};
  return r;
}

} // namespace qbattery
