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

#ifndef QBATTERY_TWIRL_HPP
#define QBATTERY_TWIRL_HPP

#include <cstddef>

#include "qbattery/linalg.hpp"
#include "qbattery/random.hpp"
#include "qbattery/stats.hpp"

namespace qbattery {

/// Haar average of U X U^dagger: (tr X / D) 1.
Mat twirl1(const Mat &x);

/// Haar average of (U (x) U) X (U (x) U)^dagger for X on C^D (x) C^D.
Mat twirl2(const Mat &x);

/// Closed-form two-copy local twirl of rho (x) rho on the register
/// (A, B, A', B'). Depends on rho only through its sector lengths.
Mat phi_map(const DensityMatrix &rho, int d);

/// Monte-Carlo estimates of the same averages. `cfg.d` is the dimension of
/// the unitaries (D for the one- and two-copy twirls, d for phi).
MatrixMoments mc_twirl1(const Mat &x, std::size_t n, const SamplerConfig &cfg,
                        Exec exec = Exec::parallel);
MatrixMoments mc_twirl2(const Mat &x, std::size_t n, const SamplerConfig &cfg,
                        Exec exec = Exec::parallel);
MatrixMoments mc_phi(const DensityMatrix &rho, std::size_t n, const SamplerConfig &cfg,
                     Exec exec = Exec::parallel);

} // namespace qbattery

#endif // QBATTERY_TWIRL_HPP
