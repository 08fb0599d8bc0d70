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


#ifndef QBATTERY_RANDOM_STATES_HPP
#define QBATTERY_RANDOM_STATES_HPP

#include "qbattery/battery.hpp"
#include "qbattery/random.hpp"

namespace qbattery {

/// Ginibre-induced mixed state G G^dagger / tr; rank = 0 means full rank.
DensityMatrix random_density_matrix(int dim, RandomStream &rng, int rank = 0);

/// Uniformly distributed unit vector.
CVec random_pure_vector(int dim, RandomStream &rng);

/// GUE-distributed Hermitian matrix with unit-variance entries.
Mat random_hermitian(int dim, RandomStream &rng);

/// rhoA (x) rhoB with independent random local states.
DensityMatrix random_product_state(int d, RandomStream &rng);

/// Convex mixture of `terms` random product states with random weights.
DensityMatrix random_separable_state(int d, RandomStream &rng, int terms = 4);

/// Random H_A, H_B and canonical V at coupling g.
BatteryHamiltonian random_battery(int d, RandomStream &rng, double g = 1.0);

} // namespace qbattery

#endif // QBATTERY_RANDOM_STATES_HPP
