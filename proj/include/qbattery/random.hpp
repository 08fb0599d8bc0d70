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

#ifndef QBATTERY_RANDOM_HPP
#define QBATTERY_RANDOM_HPP

#include <array>
#include <cstdint>

#include "qbattery/types.hpp"

namespace qbattery {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream addressed by (seed, stream, block).
///
/// The 128-bit Philox counter is laid out as
///   word 0: draw index within the block
///   word 1: block index
///   words 2-3: stream index
/// and the key is the 64-bit seed, so any (seed, stream, block) triple
/// selects a non-overlapping sequence of 2^32 Philox outputs.
class RandomStream {
public:
  RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t block = 0);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Circular complex Gaussian with E|z|^2 = 1.
  cplx complex_normal();

private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct SamplerConfig {
  int d = 2;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Draws Haar-distributed d x d unitaries: complex Ginibre matrix, QR, and
/// the phase fix Q -> Q diag(r_ii / |r_ii|).
class HaarSampler {
public:
  explicit HaarSampler(const SamplerConfig &cfg, std::uint32_t block = 0);

  Mat next();
  /// Fills `out` without reallocating when it already has the right shape.
  void next(Mat &out);

  RandomStream &stream() { return rng_; }
  int d() const { return d_; }

private:
  int d_;
  RandomStream rng_;
  Mat ginibre_;
};

/// First unitary of the stream selected by `cfg`.
Mat haar_unitary(const SamplerConfig &cfg);

/// Draw a Haar unitary from an existing random stream.
Mat haar_unitary(int d, RandomStream &rng);

} // namespace qbattery

#endif // QBATTERY_RANDOM_HPP
