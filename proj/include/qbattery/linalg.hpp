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

#ifndef QBATTERY_LINALG_HPP
#define QBATTERY_LINALG_HPP

#include <cstddef>
#include <vector>

#include "qbattery/types.hpp"

namespace qbattery {

/// Traceless Hermitian basis of su(d), normalized as tr[l_i l_j] = d delta_ij.
///
/// Ordering is fixed: the symmetric off-diagonal matrices for pairs (j, k),
/// j < k in row-major order, then the antisymmetric matrices for the same
/// pairs, then the d - 1 diagonal matrices. For d = 2 this is X, Y, Z.
struct HermitianBasis {
  int d = 0;
  std::vector<Mat> matrices;

  std::size_t size() const { return matrices.size(); }
  const Mat &operator[](std::size_t i) const { return matrices[i]; }
};

HermitianBasis gell_mann_basis(int d);

/// A validated density operator: Hermitian, unit trace and positive
/// semidefinite up to kPsdTolerance.
class DensityMatrix {
public:
  explicit DensityMatrix(Mat data, double tol = kPsdTolerance);

  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix from_pure(const CVec &psi);

  int dim() const { return static_cast<int>(data_.rows()); }
  const Mat &matrix() const { return data_; }

private:
  Mat data_;
};

Mat kron(const Mat &a, const Mat &b);
Mat identity(int dim);

bool is_hermitian(const Mat &m, double tol = 1e-10);

/// Throws invalid_dimension unless 2 <= d <= kMaxLocalDim.
void check_local_dim(int d);

/// Local dimension d for a d^2 x d^2 operator; throws dimension_mismatch.
int local_dim_of(const Mat &m);

double purity(const DensityMatrix &rho);

/// Reduced state on the `keep` subsystem of a d x d bipartite state.
DensityMatrix partial_trace(const DensityMatrix &rho, Side keep, int d);

/// Operator-level reduction (no validation); used for Hamiltonian terms.
Mat partial_trace_op(const Mat &op, Side keep, int d);

/// Partial transpose on subsystem A.
Mat partial_transpose(const Mat &op, int d);

double partial_transpose_min_eig(const DensityMatrix &rho, int d);

/// SWAP on C^d (x) C^d from its permutation definition S|a>|b> = |b>|a>.
Mat swap_operator(int d);

/// SWAP assembled as (1/d) sum_{i=0}^{d^2-1} l_i (x) l_i with l_0 = identity.
Mat swap_operator_from_basis(const HermitianBasis &basis);

/// Permutation operator exchanging tensor factors `i` and `j` of a register of
/// `n_factors` qudits of dimension d.
Mat factor_swap(int d, int n_factors, int i, int j);

/// Minimum eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Mat &h);

/// Eigenvalues and orthonormal eigenvectors (as columns) of a Hermitian matrix.
struct OrderedEigenbasis {
  RVec values;
  Mat vectors;
};

enum class EigenOrder {
  /// Descending eigenvalues. Diagonal input keeps computational-basis vectors
  /// with ties broken by index; otherwise ties are broken by the index of each
  /// vector's largest-magnitude component, whose phase is made real positive.
  descending,
  /// Computational basis in index order when the input is diagonal,
  /// `descending` otherwise.
  computational_if_diagonal,
};

OrderedEigenbasis ordered_eigenbasis(const Mat &h, EigenOrder order);

bool is_diagonal(const Mat &m, double tol = 1e-12);

} // namespace qbattery

#endif // QBATTERY_LINALG_HPP
