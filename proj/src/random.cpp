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

#include "qbattery/random.hpp"

#include <cmath>
#include <numbers>

#include "qbattery/linalg.hpp"

namespace qbattery {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t block)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0u, block, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

void RandomStream::refill() {
  buf_ = philox4x32(ctr_, key_);
  ++ctr_[0];
  used_ = 0;
}

std::uint64_t RandomStream::next_u64() {
  if (used_ > 2) refill();
  const std::uint64_t lo = buf_[static_cast<std::size_t>(used_)];
  const std::uint64_t hi = buf_[static_cast<std::size_t>(used_ + 1)];
  used_ += 2;
  return (hi << 32) | lo;
}

double RandomStream::uniform() {
  // 53 random bits mapped to the cell midpoints of a 2^-53 grid.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  have_spare_ = true;
  return r * std::cos(phi);
}

cplx RandomStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

namespace {

void fill_haar(int d, RandomStream &rng, Mat &ginibre, Mat &out) {
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) ginibre(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Mat> qr(ginibre);
  out = qr.householderQ();
  const Mat &r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    const double mag = std::abs(rjj);
    out.col(j) *= mag > 0.0 ? rjj / mag : cplx(1.0);
  }
}

} // namespace

HaarSampler::HaarSampler(const SamplerConfig &cfg, std::uint32_t block)
    : d_((check_local_dim(cfg.d), cfg.d)), rng_(cfg.seed, cfg.stream, block), ginibre_(d_, d_) {}

void HaarSampler::next(Mat &out) { fill_haar(d_, rng_, ginibre_, out); }

Mat HaarSampler::next() {
  Mat u(d_, d_);
  next(u);
  return u;
}

Mat haar_unitary(const SamplerConfig &cfg) { return HaarSampler(cfg).next(); }

Mat haar_unitary(int d, RandomStream &rng) {
  check_local_dim(d);
  Mat z(d, d);
  Mat q(d, d);
  fill_haar(d, rng, z, q);
  return q;
}

} // namespace qbattery
