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


#ifndef QBATTERY_RUNNER_HPP
#define QBATTERY_RUNNER_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbattery/config.hpp"

namespace qbattery {

inline constexpr int kSchemaVersion = 1;

/// Seed used by run_verify when the configuration does not set one.
inline constexpr std::uint64_t kDefaultVerifySeed = 1;

/// Fixed-column numeric table, one row per grid point in grid order.
struct Table {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Optional leading text column, one entry per row.
  std::string label_column;
  std::vector<std::string> labels;
};

/// CSV with a leading "# qbattery <schema> v<version>" line.
void write_csv(const Table &t, std::ostream &os);
json table_to_json(const Table &t);

struct RunOutput {
  Table table;
  json summary;
  /// False only when run_verify finds a failing check.
  bool passed = true;
};

BatteryHamiltonian make_battery(const BatterySpec &spec, std::optional<double> b = std::nullopt);
DensityMatrix make_state(const StateSpec &spec, const BatteryHamiltonian &h,
                         std::optional<double> alpha = std::nullopt);

/// Throws ErrorKind::config when the configuration carries no seed.
SamplerConfig sampler_for(const ExperimentConfig &cfg, int d, std::uint64_t stream_offset = 0);

RunOutput run_variance(const ExperimentConfig &cfg);
RunOutput run_witness(const ExperimentConfig &cfg);
RunOutput run_histogram(const ExperimentConfig &cfg);
RunOutput run_tpm(const ExperimentConfig &cfg);
RunOutput run_coincidence(const ExperimentConfig &cfg);

/// Rows over the (b, alpha) grid: closed-form variance, bounds for
/// k = 1..d, detected Schmidt number and PPT minimum eigenvalue.
RunOutput run_variance_sweep(const ExperimentConfig &cfg);
/// Rows over the (alpha, eps) grid: closed-form TPM variance and weights,
/// plus Monte-Carlo columns when cfg.mc_columns is set.
RunOutput run_tpm_sweep(const ExperimentConfig &cfg);
/// run_tpm_sweep for the tpm protocol, run_variance_sweep otherwise.
RunOutput run_sweep(const ExperimentConfig &cfg);

/// Closed forms against Monte Carlo and the exact inequality sweeps.
RunOutput run_verify(const ExperimentConfig &cfg);

} // namespace qbattery

#endif // QBATTERY_RUNNER_HPP
