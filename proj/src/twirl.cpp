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

#include "qbattery/twirl.hpp"

#include "qbattery/bloch.hpp"

namespace qbattery {

Mat twirl1(const Mat &x) {
  if (x.rows() != x.cols() || x.rows() == 0) {
    throw Error(ErrorKind::dimension_mismatch, "twirl1 expects a square matrix");
  }
  const auto dim = x.rows();
  return (x.trace() / static_cast<double>(dim)) * Mat::Identity(dim, dim);
}

Mat twirl2(const Mat &x) {
  const int dd = local_dim_of(x);
  const double D = dd;
  const Mat s = swap_operator(dd);
  const cplx tr_x = x.trace();
  const cplx tr_sx = (s * x).trace();
  const auto n = x.rows();
  return ((tr_x - tr_sx / D) * Mat::Identity(n, n) + (tr_sx - tr_x / D) * s) / (D * D - 1.0);
}

Mat phi_map(const DensityMatrix &rho, int d) {
  check_local_dim(d);
  if (rho.dim() != d * d) {
    throw Error(ErrorKind::dimension_mismatch, "state dimension is not d^2");
  }
  const SectorLengths s = sector_lengths(bloch_decompose(rho, d));
  const double dd = d;
  const double c = dd * dd - 1.0;
  const Mat one = identity(d * d * d * d);
  const Mat sa = dd * factor_swap(d, 4, 0, 2) - one;
  const Mat sb = dd * factor_swap(d, 4, 1, 3) - one;
  Mat out = one + (s.rA2 * sa + s.rB2 * sb + (s.t2 / c) * (sa * sb)) / c;
  return out / (dd * dd * dd * dd);
}

MatrixMoments mc_twirl1(const Mat &x, std::size_t n, const SamplerConfig &cfg, Exec exec) {
  if (x.rows() != cfg.d || x.cols() != cfg.d) {
    throw Error(ErrorKind::dimension_mismatch, "operator does not match sampler dimension");
  }
  return run_blocks<MatrixMoments>(n, exec, [&](std::uint32_t block, std::size_t count) {
    HaarSampler sampler(cfg, block);
    MatrixMoments acc(x.rows(), x.cols());
    Mat u(cfg.d, cfg.d);
    for (std::size_t s = 0; s < count; ++s) {
      sampler.next(u);
      acc.add(u * x * u.adjoint());
    }
    return acc;
  });
}

MatrixMoments mc_twirl2(const Mat &x, std::size_t n, const SamplerConfig &cfg, Exec exec) {
  if (x.rows() != cfg.d * cfg.d || x.cols() != cfg.d * cfg.d) {
    throw Error(ErrorKind::dimension_mismatch, "operator does not match sampler dimension");
  }
  return run_blocks<MatrixMoments>(n, exec, [&](std::uint32_t block, std::size_t count) {
    HaarSampler sampler(cfg, block);
    MatrixMoments acc(x.rows(), x.cols());
    Mat u(cfg.d, cfg.d);
    for (std::size_t s = 0; s < count; ++s) {
      sampler.next(u);
      const Mat uu = kron(u, u);
      acc.add(uu * x * uu.adjoint());
    }
    return acc;
  });
}

MatrixMoments mc_phi(const DensityMatrix &rho, std::size_t n, const SamplerConfig &cfg, Exec exec) {
  const int d = cfg.d;
  if (rho.dim() != d * d) {
    throw Error(ErrorKind::dimension_mismatch, "state does not match sampler dimension");
  }
  const Mat &m = rho.matrix();
  const auto dim4 = static_cast<Eigen::Index>(d) * d * d * d;
  return run_blocks<MatrixMoments>(n, exec, [&](std::uint32_t block, std::size_t count) {
    HaarSampler sampler(cfg, block);
    MatrixMoments acc(dim4, dim4);
    Mat ua(d, d), ub(d, d);
    for (std::size_t s = 0; s < count; ++s) {
      sampler.next(ua);
      sampler.next(ub);
      const Mat u = kron(ua, ub);
      const Mat rotated = u * m * u.adjoint();
      acc.add(kron(rotated, rotated));
    }
    return acc;
  });
}

} // namespace qbattery
