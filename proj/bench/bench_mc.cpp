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


// Serial vs OpenMP throughput of the Monte-Carlo kernels. Both paths run
// the same blocks, so the outputs are identical; only wall time differs.

#include <benchmark/benchmark.h>

#include "qbattery/battery.hpp"
#include "qbattery/coincidence.hpp"
#include "qbattery/tpm.hpp"
#include "qbattery/twirl.hpp"

namespace {

using namespace qbattery;

struct Fixture {
  BatteryHamiltonian h = ising_battery(1.0, 1.0, 1.0, 0.45);
  DensityMatrix rho = thermal_mixture_state(0.96, gibbs_state(h.HA(), 0.5), gibbs_state(h.HB(), 0.5));
  SpectralDecomposition spec = spectral_decomposition(h);
};

const Fixture &fixture() {
  static const Fixture f;
  return f;
}

Exec exec_of(const benchmark::State &state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void BM_work(benchmark::State &state) {
  const Fixture &f = fixture();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_work_statistics(f.rho, f.h, n, {4, 1, 0}, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_tpm(benchmark::State &state) {
  const Fixture &f = fixture();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_tpm_statistics(f.rho, f.spec, 0.5, 0.5, n, {4, 1, 0}, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_coincidence(benchmark::State &state) {
  const Fixture &f = fixture();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_coincidence(f.rho, f.spec, 0.7, 0.7, n, {4, 1, 0}, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_twirl2(benchmark::State &state) {
  const int D = 3;
  const Mat x = Mat::Identity(D * D, D * D) + kron(Mat::Identity(D, D), Mat::Ones(D, D));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_twirl2(x, n, {D, 1, 0}, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// second arg: 0 serial, 1 parallel
BENCHMARK(BM_work)->ArgsProduct({{1 << 14, 1 << 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tpm)->ArgsProduct({{1 << 14, 1 << 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_coincidence)->ArgsProduct({{1 << 14, 1 << 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_twirl2)->ArgsProduct({{1 << 12, 1 << 14}, {0, 1}})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
