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

#include "qbattery/bloch.hpp"

namespace qbattery {
namespace {

// tr[a b] without forming the product.
double trace_product_real(const Mat &a, const Mat &b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

} // namespace

BlochForm bloch_decompose(const DensityMatrix &rho, int d) {
  check_local_dim(d);
  return bloch_decompose(rho, gell_mann_basis(d));
}

BlochForm bloch_decompose(const DensityMatrix &rho, const HermitianBasis &basis) {
  const int d = basis.d;
  if (rho.dim() != d * d) {
    throw Error(ErrorKind::dimension_mismatch, "state dimension is not d^2");
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  const Mat rhoA = partial_trace_op(rho.matrix(), Side::A, d);
  const Mat rhoB = partial_trace_op(rho.matrix(), Side::B, d);

  BlochForm f;
  f.d = d;
  f.rA.resize(n);
  f.rB.resize(n);
  f.t.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f.rA(i) = trace_product_real(rhoA, basis[static_cast<std::size_t>(i)]);
    f.rB(i) = trace_product_real(rhoB, basis[static_cast<std::size_t>(i)]);
  }
  // t_ij = sum_{ab,ce} rho_{(a c),(b e)} l_i(b,a) l_j(e,c)
  const Mat &m = rho.matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Mat &li = basis[static_cast<std::size_t>(i)];
    // Contract the A index first: X_{c e} = sum_{ab} rho_{(a c),(b e)} li(b, a)
    Mat x = Mat::Zero(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const cplx w = li(b, a);
        if (w == cplx(0.0)) continue;
        x += w * m.block(a * d, b * d, d, d);
      }
    for (Eigen::Index j = 0; j < n; ++j) {
      f.t(i, j) = trace_product_real(x, basis[static_cast<std::size_t>(j)]);
    }
  }
  f.rA2 = f.rA.squaredNorm();
  f.rB2 = f.rB.squaredNorm();
  f.t2 = f.t.squaredNorm();
  return f;
}

Mat bloch_reconstruct(const BlochForm &form) {
  return bloch_reconstruct(form, gell_mann_basis(form.d));
}

Mat bloch_reconstruct(const BlochForm &form, const HermitianBasis &basis) {
  const int d = form.d;
  const Mat id = identity(d);
  Mat sumA = Mat::Zero(d, d);
  Mat sumB = Mat::Zero(d, d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    sumA += form.rA(static_cast<Eigen::Index>(i)) * basis[i];
    sumB += form.rB(static_cast<Eigen::Index>(i)) * basis[i];
  }
  Mat out = identity(d * d) + kron(sumA, id) + kron(id, sumB);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Mat row = Mat::Zero(d, d);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      row += form.t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * basis[j];
    }
    out += kron(basis[i], row);
  }
  return out / static_cast<double>(d * d);
}

double purity_from_bloch(const BlochForm &form) {
  const double d2 = static_cast<double>(form.d) * form.d;
  return (1.0 + form.rA2 + form.rB2 + form.t2) / d2;
}

SectorLengths sector_lengths(const BlochForm &form) { return {form.rA2, form.rB2, form.t2}; }

SectorLengths sector_lengths_from_purities(const DensityMatrix &rho, int d) {
  const Mat rhoA = partial_trace_op(rho.matrix(), Side::A, d);
  const Mat rhoB = partial_trace_op(rho.matrix(), Side::B, d);
  const double pA = rhoA.cwiseAbs2().sum();
  const double pB = rhoB.cwiseAbs2().sum();
  const double p = rho.matrix().cwiseAbs2().sum();
  SectorLengths s;
  s.rA2 = d * pA - 1.0;
  s.rB2 = d * pB - 1.0;
  s.t2 = static_cast<double>(d) * d * p - 1.0 - s.rA2 - s.rB2;
  return s;
}

RVec local_coefficients(const Mat &h, const HermitianBasis &basis) {
  if (h.rows() != basis.d || h.cols() != basis.d) {
    throw Error(ErrorKind::dimension_mismatch, "local operator is not d x d");
  }
  RVec c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    c(static_cast<Eigen::Index>(i)) = trace_product_real(h, basis[i]) / basis.d;
  }
  return c;
}

RMat correlation_coefficients(const Mat &v, const HermitianBasis &basis) {
  const int d = basis.d;
  if (v.rows() != d * d || v.cols() != d * d) {
    throw Error(ErrorKind::dimension_mismatch, "interaction is not d^2 x d^2");
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  RMat c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Mat &li = basis[static_cast<std::size_t>(i)];
    Mat x = Mat::Zero(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const cplx w = li(b, a);
        if (w == cplx(0.0)) continue;
        x += w * v.block(a * d, b * d, d, d);
      }
    for (Eigen::Index j = 0; j < n; ++j) {
      c(i, j) = trace_product_real(x, basis[static_cast<std::size_t>(j)]) / (d * d);
    }
  }
  return c;
}

} // namespace qbattery
