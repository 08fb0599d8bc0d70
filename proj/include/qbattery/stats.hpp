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

#ifndef QBATTERY_STATS_HPP
#define QBATTERY_STATS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qbattery/types.hpp"

namespace qbattery {

/// Single-pass central moments up to fourth order (Welford/Pebay updates),
/// mergeable for block-parallel reductions.
class Moments {
public:
  void add(double x);
  void merge(const Moments &other);

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance.
  double variance() const;
  /// Population central moment M_k / n for k in {2, 3, 4}.
  double central_moment(int k) const;
  double skewness() const;

  double se_mean() const;
  /// Delete-one jackknife standard error of variance(), evaluated in closed
  /// form from the central moments.
  double se_variance() const;
  /// Standard error of skewness() for a symmetric parent distribution.
  double se_skewness() const;

private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

/// Elementwise mean and variance of a stream of complex matrices, kept
/// separately for real and imaginary parts.
class MatrixMoments {
public:
  MatrixMoments() = default;
  MatrixMoments(Eigen::Index rows, Eigen::Index cols);

  void add(const Mat &x);
  void merge(const MatrixMoments &other);

  std::uint64_t count() const { return n_; }
  const Mat &mean() const { return mean_; }
  /// Standard error of the mean for the real (imaginary) parts.
  RMat se_real() const;
  RMat se_imag() const;

private:
  std::uint64_t n_ = 0;
  Mat mean_;
  RMat m2re_;
  RMat m2im_;
};

/// Largest |mean - expected| / (k_se * se + floor) over all real and
/// imaginary components; <= 1 means agreement within k_se standard errors.
double max_se_ratio(const MatrixMoments &mc, const Mat &expected, double k_se, double floor = 1e-12);

/// Samples per Monte-Carlo block. Block b of a run draws from
/// RandomStream(seed, stream, b), so results do not depend on the thread count.
inline constexpr std::size_t kMcBlockSize = 1024;

inline std::size_t block_count(std::size_t n) { return (n + kMcBlockSize - 1) / kMcBlockSize; }

/// Evaluate `block_fn(block, count)` for every block of an n-sample run and
/// merge the partial accumulators in block order.
template <class Acc, class BlockFn>
Acc run_blocks(std::size_t n, Exec exec, BlockFn &&block_fn) {
  const std::size_t nb = block_count(n);
  std::vector<Acc> parts(nb);
  auto count_of = [n](std::size_t b) {
    const std::size_t begin = b * kMcBlockSize;
    return (begin + kMcBlockSize <= n) ? kMcBlockSize : n - begin;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long b = 0; b < static_cast<long>(nb); ++b) {
      const auto ub = static_cast<std::size_t>(b);
      parts[ub] = block_fn(static_cast<std::uint32_t>(ub), count_of(ub));
    }
  } else {
    for (std::size_t b = 0; b < nb; ++b) {
      parts[b] = block_fn(static_cast<std::uint32_t>(b), count_of(b));
    }
  }
  Acc total = nb > 0 ? std::move(parts[0]) : Acc{};
  for (std::size_t b = 1; b < nb; ++b) total.merge(parts[b]);
  return total;
}

} // namespace qbattery

#endif // QBATTERY_STATS_HPP
