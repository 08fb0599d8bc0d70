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


#include "qbattery/random_states.hpp"

namespace qbattery {

DensityMatrix random_density_matrix(int dim, RandomStream &rng, int rank) {
  if (dim < 1) throw Error(ErrorKind::invalid_dimension, "dimension must be positive");
  const int r = rank <= 0 ? dim : rank;
  Mat g(dim, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

CVec random_pure_vector(int dim, RandomStream &rng) {
  if (dim < 1) throw Error(ErrorKind::invalid_dimension, "dimension must be positive");
  CVec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

Mat random_hermitian(int dim, RandomStream &rng) {
  Mat g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  return 0.5 * (g + g.adjoint());
}

DensityMatrix random_product_state(int d, RandomStream &rng) {
  check_local_dim(d);
  const DensityMatrix a = random_density_matrix(d, rng);
  const DensityMatrix b = random_density_matrix(d, rng);
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

DensityMatrix random_separable_state(int d, RandomStream &rng, int terms) {
  check_local_dim(d);
  if (terms < 1) throw Error(ErrorKind::out_of_range, "need at least one product term");
  Mat rho = Mat::Zero(d * d, d * d);
  double total = 0.0;
  for (int k = 0; k < terms; ++k) {
    const double w = rng.uniform();
    // Pure product terms push the mixture toward the separable boundary.
    const CVec a = random_pure_vector(d, rng);
    const CVec b = random_pure_vector(d, rng);
    const CVec ab = kron(a, b);
    rho += w * (ab * ab.adjoint());
    total += w;
  }
  return DensityMatrix(rho / total);
}

BatteryHamiltonian random_battery(int d, RandomStream &rng, double g) {
  check_local_dim(d);
  const Mat ha = random_hermitian(d, rng);
  const Mat hb = random_hermitian(d, rng);
  const Mat v = canonical_interaction(random_hermitian(d * d, rng), d);
  return BatteryHamiltonian::from_parts(ha, hb, v, g);
}

} // namespace qbattery
