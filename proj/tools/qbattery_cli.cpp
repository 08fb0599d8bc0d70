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


// Command-line front end: one subcommand per experiment, JSON configs with
// flag overrides, CSV or JSON output.
//
// Exit status: 0 success, 1 configuration/input error, 2 verification failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qbattery/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<double> eps, eps_a, eps_b;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> bin_width;
  std::optional<double> tolerance_se;
  std::optional<int> dim;
  std::optional<std::string> protocol;
  bool mc = false;
};

void add_common(CLI::App *cmd, Flags &f) {
  cmd->add_option("--config", f.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Monte-Carlo seed");
  cmd->add_option("--n", f.n, "number of unitary pairs (0 disables Monte Carlo)");
  cmd->add_option("--eps", f.eps, "measurement efficiency for both sides");
  cmd->add_option("--eps-a", f.eps_a, "measurement efficiency on A");
  cmd->add_option("--eps-b", f.eps_b, "measurement efficiency on B");
  cmd->add_option("--out", f.out, "output path (default: stdout)");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

qbattery::ExperimentConfig build_config(const Flags &f, qbattery::Protocol protocol, bool keep_protocol) {
  qbattery::ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = qbattery::load_config(f.config_path);
  if (!keep_protocol) cfg.protocol = protocol;
  if (f.protocol) cfg.protocol = qbattery::protocol_from_string(*f.protocol);
  if (f.seed) cfg.seed = *f.seed;
  if (f.n) {
    cfg.n_unitaries = *f.n;
    cfg.verify_n = *f.n;
  }
  if (f.eps) cfg.epsA = cfg.epsB = *f.eps;
  if (f.eps_a) cfg.epsA = *f.eps_a;
  if (f.eps_b) cfg.epsB = *f.eps_b;
  if (f.out) cfg.out_path = *f.out;
  if (f.format) cfg.format = qbattery::format_from_string(*f.format);
  if (f.bin_width) cfg.bin_width = *f.bin_width;
  if (f.tolerance_se) cfg.verify_tolerance_se = *f.tolerance_se;
  if (f.dim) cfg.verify_d = *f.dim;
  if (f.mc) cfg.mc_columns = true;
  return cfg;
}

void emit(const qbattery::ExperimentConfig &cfg, const qbattery::RunOutput &out, bool side_summary) {
  std::ofstream file;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) throw qbattery::Error(qbattery::ErrorKind::config, "cannot write '" + cfg.out_path + "'");
  }
  std::ostream &os = cfg.out_path.empty() ? std::cout : file;
  if (cfg.format == qbattery::OutputFormat::json) {
    qbattery::json doc = {{"summary", out.summary}, {"table", qbattery::table_to_json(out.table)}};
    os << doc.dump(2) << '\n';
    return;
  }
  qbattery::write_csv(out.table, os);
  if (!side_summary) return;
  if (cfg.out_path.empty()) {
    std::cerr << out.summary.dump(2) << '\n';
  } else {
    std::ofstream summary(cfg.out_path + ".summary.json");
    summary << out.summary.dump(2) << '\n';
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Work fluctuations and Schmidt-number witnesses for bipartite quantum batteries"};
  app.require_subcommand(1);
  Flags f;

  auto *variance = app.add_subcommand("variance", "Haar work variance, closed form and Monte Carlo");
  auto *witness = app.add_subcommand("witness", "Schmidt-number thresholds for one state");
  auto *histogram = app.add_subcommand("histogram", "Binned Monte-Carlo work samples");
  auto *tpm = app.add_subcommand("tpm", "Noisy two-point-measurement variance");
  auto *coincidence = app.add_subcommand("coincidence", "Two-copy energy coincidence probability");
  auto *sweep = app.add_subcommand("sweep", "Grid sweep (variance or tpm protocol)");
  auto *verify = app.add_subcommand("verify", "Closed forms against Monte Carlo");
  for (CLI::App *cmd : {variance, witness, histogram, tpm, coincidence, sweep, verify}) add_common(cmd, f);
  histogram->add_option("--bin-width", f.bin_width, "bin width in energy units");
  sweep->add_option("--protocol", f.protocol, "variance or tpm")->check(CLI::IsMember({"variance", "tpm"}));
  sweep->add_flag("--mc", f.mc, "add Monte-Carlo columns to tpm sweeps");
  verify->add_option("--tolerance-se", f.tolerance_se, "allowed deviation in standard errors");
  verify->add_option("--dim", f.dim, "local dimension of the random test problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    using qbattery::Protocol;
    if (variance->parsed()) {
      const auto cfg = build_config(f, Protocol::variance, false);
      emit(cfg, qbattery::run_variance(cfg), false);
    } else if (witness->parsed()) {
      const auto cfg = build_config(f, Protocol::witness, false);
      emit(cfg, qbattery::run_witness(cfg), false);
    } else if (histogram->parsed()) {
      const auto cfg = build_config(f, Protocol::histogram, false);
      emit(cfg, qbattery::run_histogram(cfg), true);
    } else if (tpm->parsed()) {
      const auto cfg = build_config(f, Protocol::tpm, false);
      emit(cfg, qbattery::run_tpm(cfg), false);
    } else if (coincidence->parsed()) {
      const auto cfg = build_config(f, Protocol::coincidence, false);
      emit(cfg, qbattery::run_coincidence(cfg), false);
    } else if (sweep->parsed()) {
      const auto cfg = build_config(f, Protocol::variance, true);
      emit(cfg, qbattery::run_sweep(cfg), false);
    } else if (verify->parsed()) {
      const auto cfg = build_config(f, Protocol::verify, false);
      const qbattery::RunOutput out = qbattery::run_verify(cfg);
      emit(cfg, out, false);
      if (!out.passed) {
        for (const auto &c : out.summary["checks"]) {
          if (!c["passed"].get<bool>()) {
            std::cerr << "verify: " << c["name"].get<std::string>() << " failed, deviation "
                      << c["deviation"].dump() << " > tolerance " << c["tolerance"].dump() << '\n';
          }
        }
        return kExitVerify;
      }
    }
  } catch (const qbattery::Error &e) {
    std::cerr << "qbattery: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "qbattery: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
