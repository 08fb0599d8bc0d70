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

#include "qbattery/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace qbattery {

const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::invalid_dimension: return "invalid-dimension";
  case ErrorKind::dimension_mismatch: return "dimension-mismatch";
  case ErrorKind::invalid_state: return "invalid-state";
  case ErrorKind::invalid_temperature: return "invalid-temperature";
  case ErrorKind::incompatible_marginals: return "incompatible-marginals";
  case ErrorKind::out_of_range: return "out-of-range";
  case ErrorKind::divergent_labels: return "divergent-labels";
  case ErrorKind::non_pure_state: return "non-pure-state";
  case ErrorKind::asymmetric_fields: return "asymmetric-fields";
  case ErrorKind::undefined_bound: return "undefined-bound";
  case ErrorKind::invalid_sample_count: return "invalid-sample-count";
  case ErrorKind::config: return "config";
  }
  return "unknown";
}

void check_local_dim(int d) {
  if (d < 2 || d > kMaxLocalDim) {
    throw Error(ErrorKind::invalid_dimension,
                "local dimension must lie in [2, " + std::to_string(kMaxLocalDim) +
                    "], got " + std::to_string(d));
  }
}

int local_dim_of(const Mat &m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "operator is not square");
  }
  const auto dim = static_cast<int>(m.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
  if (d * d != dim) {
    throw Error(ErrorKind::dimension_mismatch,
                "operator dimension " + std::to_string(dim) + " is not a square d^2");
  }
  check_local_dim(d);
  return d;
}

HermitianBasis gell_mann_basis(int d) {
  check_local_dim(d);
  HermitianBasis basis;
  basis.d = d;
  basis.matrices.reserve(static_cast<std::size_t>(d * d - 1));
  // Standard Gell-Mann normalization is tr = 2; rescale to tr = d.
  const double scale = std::sqrt(d / 2.0);
  const cplx I(0.0, 1.0);

  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Mat m = Mat::Zero(d, d);
      m(j, k) = scale;
      m(k, j) = scale;
      basis.matrices.push_back(std::move(m));
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Mat m = Mat::Zero(d, d);
      m(j, k) = -I * scale;
      m(k, j) = I * scale;
      basis.matrices.push_back(std::move(m));
    }
  }
  for (int l = 1; l < d; ++l) {
    Mat m = Mat::Zero(d, d);
    const double c = scale * std::sqrt(2.0 / (l * (l + 1.0)));
    for (int q = 0; q < l; ++q) m(q, q) = c;
    m(l, l) = -l * c;
    basis.matrices.push_back(std::move(m));
  }
  return basis;
}

bool is_hermitian(const Mat &m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const Mat &h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(Mat data, double tol) : data_(std::move(data)) {
  if (data_.rows() == 0 || data_.rows() != data_.cols()) {
    throw Error(ErrorKind::invalid_state, "density matrix must be square and non-empty");
  }
  if (!is_hermitian(data_, std::max(tol, 1e-10))) {
    throw Error(ErrorKind::invalid_state, "density matrix is not Hermitian");
  }
  const cplx tr = data_.trace();
  if (std::abs(tr.real() - 1.0) > tol || std::abs(tr.imag()) > tol) {
    throw Error(ErrorKind::invalid_state, "density matrix trace is not 1");
  }
  // Symmetrize away rounding so downstream eigen-solvers see exact Hermiticity.
  data_ = 0.5 * (data_ + data_.adjoint()).eval();
  if (min_eigenvalue(data_) < -tol) {
    throw Error(ErrorKind::invalid_state, "density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(Mat::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::from_pure(const CVec &psi) {
  const double n = psi.norm();
  if (n == 0.0) throw Error(ErrorKind::invalid_state, "zero state vector");
  const CVec u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

Mat kron(const Mat &a, const Mat &b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Mat identity(int dim) { return Mat::Identity(dim, dim); }

double purity(const DensityMatrix &rho) {
  const Mat &m = rho.matrix();
  // tr[rho^2] = sum |rho_ij|^2 for Hermitian rho
  return m.cwiseAbs2().sum();
}

Mat partial_trace_op(const Mat &op, Side keep, int d) {
  if (op.rows() != d * d || op.cols() != d * d) {
    throw Error(ErrorKind::dimension_mismatch, "operator is not d^2 x d^2");
  }
  Mat out = Mat::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      cplx s = 0.0;
      for (int k = 0; k < d; ++k) {
        s += keep == Side::A ? op(a * d + k, b * d + k) : op(k * d + a, k * d + b);
      }
      out(a, b) = s;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix &rho, Side keep, int d) {
  if (rho.dim() != d * d) {
    throw Error(ErrorKind::dimension_mismatch, "state dimension is not d^2");
  }
  return DensityMatrix(partial_trace_op(rho.matrix(), keep, d));
}

Mat partial_transpose(const Mat &op, int d) {
  if (op.rows() != d * d || op.cols() != d * d) {
    throw Error(ErrorKind::dimension_mismatch, "operator is not d^2 x d^2");
  }
  Mat out(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) out(i * d + j, k * d + l) = op(k * d + j, i * d + l);
  return out;
}

double partial_transpose_min_eig(const DensityMatrix &rho, int d) {
  if (rho.dim() != d * d) {
    throw Error(ErrorKind::dimension_mismatch, "state dimension is not d^2");
  }
  return min_eigenvalue(partial_transpose(rho.matrix(), d));
}

Mat swap_operator(int d) {
  check_local_dim(d);
  Mat s = Mat::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s(b * d + a, a * d + b) = 1.0;
  return s;
}

Mat swap_operator_from_basis(const HermitianBasis &basis) {
  const int d = basis.d;
  Mat s = kron(identity(d), identity(d));
  for (const Mat &l : basis.matrices) s += kron(l, l);
  return s / static_cast<double>(d);
}

Mat factor_swap(int d, int n_factors, int i, int j) {
  if (i < 0 || j < 0 || i >= n_factors || j >= n_factors) {
    throw Error(ErrorKind::out_of_range, "factor index out of range");
  }
  long dim = 1;
  for (int f = 0; f < n_factors; ++f) dim *= d;
  Mat p = Mat::Zero(dim, dim);
  std::vector<int> digits(static_cast<std::size_t>(n_factors));
  for (long idx = 0; idx < dim; ++idx) {
    long r = idx;
    for (int f = n_factors - 1; f >= 0; --f) {
      digits[static_cast<std::size_t>(f)] = static_cast<int>(r % d);
      r /= d;
    }
    std::swap(digits[static_cast<std::size_t>(i)], digits[static_cast<std::size_t>(j)]);
    long out = 0;
    for (int f = 0; f < n_factors; ++f) out = out * d + digits[static_cast<std::size_t>(f)];
    p(out, idx) = 1.0;
  }
  return p;
}

bool is_diagonal(const Mat &m, double tol) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

OrderedEigenbasis ordered_eigenbasis(const Mat &h, EigenOrder order) {
  if (!is_hermitian(h)) throw Error(ErrorKind::invalid_state, "matrix is not Hermitian");
  const auto n = h.rows();
  OrderedEigenbasis out;
  if (is_diagonal(h)) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    if (order == EigenOrder::descending) {
      std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        return h(a, a).real() > h(b, b).real();
      });
    }
    out.values.resize(n);
    out.vectors = Mat::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index i = idx[static_cast<std::size_t>(k)];
      out.values(k) = h(i, i).real();
      out.vectors(i, k) = 1.0;
    }
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const RVec vals = es.eigenvalues();
  const Mat vecs = es.eigenvectors();
  struct Entry {
    double value;
    Eigen::Index lead;
    Eigen::Index col;
  };
  std::vector<Entry> entries;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index lead = 0;
    vecs.col(c).cwiseAbs().maxCoeff(&lead);
    entries.push_back({vals(c), lead, c});
  }
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  const double tie = 1e-9 * scale;
  // Group near-equal eigenvalues first, then order groups descending.
  std::sort(entries.begin(), entries.end(), [](const Entry &a, const Entry &b) { return a.value > b.value; });
  for (std::size_t begin = 0; begin < entries.size();) {
    std::size_t end = begin + 1;
    while (end < entries.size() && entries[begin].value - entries[end].value <= tie) ++end;
    std::stable_sort(entries.begin() + static_cast<long>(begin), entries.begin() + static_cast<long>(end),
                     [](const Entry &a, const Entry &b) { return a.lead < b.lead; });
    begin = end;
  }
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Entry &e = entries[static_cast<std::size_t>(k)];
    out.values(k) = e.value;
    CVec v = vecs.col(e.col);
    const cplx lead = v(e.lead);
    v *= std::conj(lead) / std::abs(lead);
    out.vectors.col(k) = v;
  }
  return out;
}

} // namespace qbattery
