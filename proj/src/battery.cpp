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

#include "qbattery/battery.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "qbattery/log.hpp"

namespace qbattery {
namespace {

Mat pauli_z() {
  Mat z = Mat::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

void require_hermitian(const Mat &m, const char *what) {
  if (!is_hermitian(m, 1e-10)) {
    throw Error(ErrorKind::invalid_state, std::string(what) + " is not Hermitian");
  }
}

void require_state_dim(const DensityMatrix &rho, const BatteryHamiltonian &h) {
  if (rho.dim() != h.d() * h.d()) {
    throw Error(ErrorKind::dimension_mismatch, "state and Hamiltonian dimensions differ");
  }
}

// Evaluates W for successive unitary pairs with preallocated buffers.
class WorkKernel {
public:
  WorkKernel(const DensityMatrix &rho, const BatteryHamiltonian &h)
      : rho_(rho.matrix()), h_(h.full()),
        energy_((rho_.cwiseProduct(h_.transpose())).sum().real()) {}

  double operator()(const Mat &ua, const Mat &ub) {
    u_ = kron(ua, ub);
    left_.noalias() = u_ * rho_;
    right_.noalias() = u_.adjoint() * h_;
    return energy_ - (left_.cwiseProduct(right_.transpose())).sum().real();
  }

private:
  const Mat &rho_;
  const Mat &h_;
  double energy_;
  Mat u_, left_, right_;
};

struct HistogramAccumulator {
  std::map<long long, std::uint64_t> bins;
  Moments moments;

  void merge(const HistogramAccumulator &o) {
    for (const auto &[k, c] : o.bins) bins[k] += c;
    moments.merge(o.moments);
  }
};

} // namespace

Mat canonical_interaction(const Mat &v, int d) {
  const double dd = d;
  const Mat id = identity(d);
  const cplx tr_v = v.trace();
  const Mat local_a = partial_trace_op(v, Side::A, d) / dd - (tr_v / (dd * dd)) * id;
  const Mat local_b = partial_trace_op(v, Side::B, d) / dd - (tr_v / (dd * dd)) * id;
  return v - kron(local_a, id) - kron(id, local_b) - (tr_v / (dd * dd)) * identity(d * d);
}

BatteryHamiltonian BatteryHamiltonian::from_parts(const Mat &h_a, const Mat &h_b, const Mat &v, double g) {
  const int d = static_cast<int>(h_a.rows());
  check_local_dim(d);
  if (h_a.cols() != d || h_b.rows() != d || h_b.cols() != d) {
    throw Error(ErrorKind::dimension_mismatch, "local Hamiltonians must both be d x d");
  }
  if (v.rows() != d * d || v.cols() != d * d) {
    throw Error(ErrorKind::dimension_mismatch, "interaction must be d^2 x d^2");
  }
  require_hermitian(h_a, "H_A");
  require_hermitian(h_b, "H_B");
  require_hermitian(v, "V");

  const double dd = d;
  const Mat id = identity(d);
  const cplx tr_v = v.trace();
  const Mat local_a = partial_trace_op(v, Side::A, d) / dd - (tr_v / (dd * dd)) * id;
  const Mat local_b = partial_trace_op(v, Side::B, d) / dd - (tr_v / (dd * dd)) * id;

  BatteryHamiltonian out;
  out.d_ = d;
  out.g_ = g;
  out.v_ = canonical_interaction(v, d);
  out.ha_ = h_a + g * local_a;
  out.hb_ = h_b + g * local_b;
  out.dropped_constant_ = g * tr_v.real() / (dd * dd);

  const double local_norm = local_a.norm() + local_b.norm();
  const bool has_local = local_norm > 1e-12 * (1.0 + v.norm());
  const bool has_constant = std::abs(out.dropped_constant_) > 1e-12;
  if (g != 0.0 && (has_local || has_constant)) {
    std::ostringstream msg;
    msg << "interaction canonicalized:";
    if (has_local) msg << " local parts (norm " << local_norm << ") folded into H_A/H_B;";
    if (has_constant) msg << " constant " << out.dropped_constant_ << " dropped;";
    log_warning(msg.str());
  }

  out.full_ = kron(out.ha_, id) + kron(id, out.hb_) + g * out.v_;
  const HermitianBasis basis = gell_mann_basis(d);
  out.hA_coef_ = local_coefficients(out.ha_, basis);
  out.hB_coef_ = local_coefficients(out.hb_, basis);
  out.v_coef_ = correlation_coefficients(out.v_, basis);
  return out;
}

BatteryHamiltonian ising_battery(double J1, double J2, double J3, double b) {
  const Mat z = pauli_z();
  const Mat i2 = identity(2);
  const Mat zz = kron(z, z);
  const Mat field = kron(z, i2) + kron(i2, z);
  const Mat h_a = J1 * zz + b * field;
  const Mat h_b = J3 * zz + b * field;
  const Mat v = kron(kron(i2, z), kron(z, i2));
  return BatteryHamiltonian::from_parts(h_a, h_b, v, J2);
}

DensityMatrix gibbs_state(const Mat &h, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorKind::invalid_temperature, "temperature must be finite and > 0");
  }
  require_hermitian(h, "Hamiltonian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const RVec &e = es.eigenvalues();
  const double e_min = e.minCoeff();
  RVec w = (-(e.array() - e_min) / temperature).exp().matrix();
  w /= w.sum();
  const Mat &vecs = es.eigenvectors();
  Mat rho = vecs * w.cast<cplx>().asDiagonal() * vecs.adjoint();
  return DensityMatrix(rho);
}

CVec thermal_purification(const DensityMatrix &tau_a, const DensityMatrix &tau_b) {
  if (tau_a.dim() != tau_b.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "local states have different dimensions");
  }
  const int d = tau_a.dim();
  const OrderedEigenbasis ea = ordered_eigenbasis(tau_a.matrix(), EigenOrder::descending);
  const OrderedEigenbasis eb = ordered_eigenbasis(tau_b.matrix(), EigenOrder::descending);
  if ((ea.values - eb.values).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorKind::incompatible_marginals, "local spectra differ; no common purification");
  }
  CVec phi = CVec::Zero(d * d);
  for (int i = 0; i < d; ++i) {
    const double p = std::max(0.0, ea.values(i));
    phi += std::sqrt(p) * kron(ea.vectors.col(i), eb.vectors.col(i));
  }
  return phi;
}

DensityMatrix thermal_mixture_state(double alpha, const DensityMatrix &tau_a, const DensityMatrix &tau_b) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::out_of_range, "mixing ratio alpha must lie in [0, 1]");
  }
  const CVec phi = thermal_purification(tau_a, tau_b);
  const Mat rho = alpha * (phi * phi.adjoint()) + (1.0 - alpha) * kron(tau_a.matrix(), tau_b.matrix());
  return DensityMatrix(rho);
}

double work(const DensityMatrix &rho, const BatteryHamiltonian &h, const Mat &ua, const Mat &ub) {
  require_state_dim(rho, h);
  if (ua.rows() != h.d() || ua.cols() != h.d() || ub.rows() != h.d() || ub.cols() != h.d()) {
    throw Error(ErrorKind::dimension_mismatch, "unitaries must be d x d");
  }
  const Mat u = kron(ua, ub);
  const Mat diff = rho.matrix() - u * rho.matrix() * u.adjoint();
  return (diff * h.full()).trace().real();
}

double analytic_work_mean(const DensityMatrix &rho, const BatteryHamiltonian &h) {
  require_state_dim(rho, h);
  const double dd = h.d();
  const Mat &hm = h.full();
  return (rho.matrix() * hm).trace().real() - hm.trace().real() / (dd * dd);
}

double work_variance_from_scalars(int d, const SectorLengths &s, double hA2, double hB2, double g2v2) {
  const double c = static_cast<double>(d) * d - 1.0;
  return (s.rA2 * hA2 + s.rB2 * hB2 + s.t2 * g2v2 / c) / c;
}

WorkStatistics analytic_work_variance(const DensityMatrix &rho, const BatteryHamiltonian &h) {
  require_state_dim(rho, h);
  const SectorLengths s = sector_lengths(bloch_decompose(rho, h.d()));
  WorkStatistics out;
  out.mean = analytic_work_mean(rho, h);
  out.variance = work_variance_from_scalars(h.d(), s, h.hA2(), h.hB2(), h.g2v2());
  return out;
}

WorkStatistics mc_work_statistics(const DensityMatrix &rho, const BatteryHamiltonian &h, std::size_t n,
                                  const SamplerConfig &cfg, Exec exec) {
  require_state_dim(rho, h);
  if (n < 2) throw Error(ErrorKind::invalid_sample_count, "need at least two samples");
  if (cfg.d != h.d()) throw Error(ErrorKind::dimension_mismatch, "sampler dimension differs from battery");

  const Moments m = run_blocks<Moments>(n, exec, [&](std::uint32_t block, std::size_t count) {
    HaarSampler sampler(cfg, block);
    WorkKernel kernel(rho, h);
    Moments acc;
    Mat ua(h.d(), h.d()), ub(h.d(), h.d());
    for (std::size_t s = 0; s < count; ++s) {
      sampler.next(ua);
      sampler.next(ub);
      acc.add(kernel(ua, ub));
    }
    return acc;
  });
  return {m.mean(), m.variance(), m.count(), m.se_mean(), m.se_variance()};
}

WorkHistogram work_histogram(const DensityMatrix &rho, const BatteryHamiltonian &h, std::size_t n,
                             double bin_width, const SamplerConfig &cfg, Exec exec) {
  require_state_dim(rho, h);
  if (!(bin_width > 0.0)) throw Error(ErrorKind::out_of_range, "bin width must be > 0");
  if (cfg.d != h.d()) throw Error(ErrorKind::dimension_mismatch, "sampler dimension differs from battery");

  const HistogramAccumulator acc =
      run_blocks<HistogramAccumulator>(n, exec, [&](std::uint32_t block, std::size_t count) {
        HaarSampler sampler(cfg, block);
        WorkKernel kernel(rho, h);
        HistogramAccumulator part;
        Mat ua(h.d(), h.d()), ub(h.d(), h.d());
        for (std::size_t s = 0; s < count; ++s) {
          sampler.next(ua);
          sampler.next(ub);
          const double w = kernel(ua, ub);
          ++part.bins[static_cast<long long>(std::floor(w / bin_width))];
          part.moments.add(w);
        }
        return part;
      });

  WorkHistogram out;
  out.bin_width = bin_width;
  out.n_samples = acc.moments.count();
  out.moments = acc.moments;
  if (!acc.bins.empty()) {
    const long long lo = acc.bins.begin()->first;
    const long long hi = acc.bins.rbegin()->first;
    out.origin = static_cast<double>(lo) * bin_width;
    out.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (const auto &[k, c] : acc.bins) out.counts[static_cast<std::size_t>(k - lo)] = c;
  }
  return out;
}

SpectralDecomposition spectral_decomposition(const BatteryHamiltonian &h) {
  const int d = h.d();
  SpectralDecomposition s;
  s.d = d;
  s.g = h.g();
  const OrderedEigenbasis ea = ordered_eigenbasis(h.HA(), EigenOrder::computational_if_diagonal);
  const OrderedEigenbasis eb = ordered_eigenbasis(h.HB(), EigenOrder::computational_if_diagonal);
  s.EA = ea.values;
  s.EB = eb.values;
  s.basisA = ea.vectors;
  s.basisB = eb.vectors;
  for (int i = 0; i < d; ++i) {
    s.PiA.push_back(ea.vectors.col(i) * ea.vectors.col(i).adjoint());
    s.PiB.push_back(eb.vectors.col(i) * eb.vectors.col(i).adjoint());
  }

  // V in the product eigenbasis: its diagonal is D_ij.
  const Mat basis = kron(s.basisA, s.basisB);
  const Mat v_eig = basis.adjoint() * h.V() * basis;
  s.D.resize(d, d);
  Mat v_diag = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const int k = i * d + j;
      s.D(i, j) = v_eig(k, k).real();
      v_diag(k, k) = s.D(i, j);
    }
  }
  s.Vod = h.V() - basis * v_diag * basis.adjoint();
  s.HD = h.full() - h.g() * s.Vod;
  s.Eij.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s.Eij(i, j) = s.EA(i) + s.EB(j) + h.g() * s.D(i, j);
  s.trHA = h.HA().trace().real();
  s.trHB = h.HB().trace().real();
  s.hA2 = h.hA2();
  s.hB2 = h.hB2();
  s.g2v2_diag = h.g() * h.g() * s.D.squaredNorm() / (static_cast<double>(d) * d);
  return s;
}

} // namespace qbattery
