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


#ifndef QBATTERY_CONFIG_HPP
#define QBATTERY_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbattery/io.hpp"

namespace qbattery {

enum class Protocol { variance, witness, histogram, tpm, coincidence, verify };
enum class OutputFormat { csv, json };

const char *to_string(Protocol p);
const char *to_string(OutputFormat f);
Protocol protocol_from_string(const std::string &s);
OutputFormat format_from_string(const std::string &s);

struct BatterySpec {
  enum class Kind { ising, explicit_matrices };
  Kind kind = Kind::ising;
  /// Ising family, energies in units of J2.
  double J1 = 0.5, J2 = 1.0, J3 = 0.5, b = 0.45;
  /// Explicit family.
  Mat HA, HB, V;
  double g = 1.0;
};

struct StateSpec {
  enum class Kind { thermal_mixture, matrix, maximally_mixed, pure };
  Kind kind = Kind::thermal_mixture;
  double alpha = 0.96;
  double T = 1.5;
  Mat rho;
  CVec psi;
};

struct ExperimentConfig {
  Protocol protocol = Protocol::variance;
  BatterySpec battery;
  StateSpec state;

  /// Sweep grids; an empty grid means "use the protocol default".
  std::vector<double> b_grid, alpha_grid, eps_grid;

  double epsA = 1.0, epsB = 1.0;

  std::size_t n_unitaries = 100000;
  /// Required for every Monte-Carlo run.
  std::optional<std::uint64_t> seed;
  std::uint64_t stream = 0;
  /// Adds Monte-Carlo columns to sweeps.
  bool mc_columns = false;

  double bin_width = 0.1;

  int verify_d = 2;
  std::size_t verify_n = 10000;
  double verify_tolerance_se = 5.0;

  std::string out_path;
  OutputFormat format = OutputFormat::csv;
};

/// Parses a configuration document. Grids accept explicit lists or
/// {"from", "to", "count"} ranges. Unknown keys are rejected; errors carry
/// ErrorKind::config and name the offending key.
ExperimentConfig config_from_json(const json &j);
ExperimentConfig load_config(const std::string &path);

/// Canonical form; config_from_json(config_to_json(c)) reproduces c.
json config_to_json(const ExperimentConfig &c);

/// count evenly spaced points from `from` to `to`, both included.
std::vector<double> linspace(double from, double to, std::size_t count);

} // namespace qbattery

#endif // QBATTERY_CONFIG_HPP
