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


#include "qbattery/runner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <ostream>

#include "qbattery/random_states.hpp"
#include "qbattery/twirl.hpp"

namespace qbattery {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string &key, const std::string &msg) {
  throw Error(ErrorKind::config, "key '" + key + "': " + msg);
}

bool mc_requested(const ExperimentConfig &cfg) { return cfg.n_unitaries >= 2; }

// Evaluates rows[i] = fn(i) on the OpenMP pool; rows stay in grid order.
void parallel_rows(std::size_t n, std::vector<std::vector<double>> &rows,
                   const std::function<std::vector<double>(std::size_t)> &fn) {
  rows.assign(n, {});
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      rows[u] = fn(u);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (const auto &e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<double> b_values(const ExperimentConfig &cfg, std::size_t default_count) {
  if (cfg.battery.kind != BatterySpec::Kind::ising) {
    if (!cfg.b_grid.empty()) config_error("grid.b", "field grids need the ising battery");
    return {kNaN};
  }
  if (!cfg.b_grid.empty()) return cfg.b_grid;
  return default_count > 0 ? linspace(0.0, 1.0, default_count) : std::vector<double>{cfg.battery.b};
}

std::vector<double> alpha_values(const ExperimentConfig &cfg, std::size_t default_count) {
  if (cfg.state.kind != StateSpec::Kind::thermal_mixture) {
    if (!cfg.alpha_grid.empty()) config_error("grid.alpha", "mixing grids need the thermal_mixture state");
    return {kNaN};
  }
  if (!cfg.alpha_grid.empty()) return cfg.alpha_grid;
  return default_count > 0 ? linspace(0.0, 1.0, default_count) : std::vector<double>{cfg.state.alpha};
}

std::optional<double> opt(double x) { return std::isnan(x) ? std::nullopt : std::optional<double>(x); }

json echo_inputs(const ExperimentConfig &cfg) {
  json j = config_to_json(cfg);
  j.erase("output");
  return j;
}

struct Check {
  std::string name;
  bool passed = false;
  double deviation = 0.0;
  double tolerance = 0.0;
  std::string unit;
  json detail;
};

void to_json(json &j, const Check &c) {
  j = {{"name", c.name},           {"passed", c.passed}, {"deviation", c.deviation},
       {"tolerance", c.tolerance}, {"unit", c.unit},     {"detail", c.detail}};
}

Check se_check(const std::string &name, double measured, double expected, double se, double k) {
  Check c;
  c.name = name;
  c.unit = "standard errors";
  c.deviation = std::abs(measured - expected) / std::max(se, 1e-12);
  c.tolerance = k;
  c.passed = c.deviation <= k;
  c.detail = {{"measured", measured}, {"expected", expected}, {"se", se}};
  return c;
}

Check bound_check(const std::string &name, double worst, double tolerance) {
  Check c;
  c.name = name;
  c.unit = "absolute";
  c.deviation = worst;
  c.tolerance = tolerance;
  c.passed = worst <= tolerance;
  return c;
}

} // namespace

void write_csv(const Table &t, std::ostream &os) {
  os << "# qbattery " << t.schema << " v" << kSchemaVersion << '\n';
  const bool labelled = !t.label_column.empty();
  if (labelled) os << t.label_column << ',';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (labelled) os << t.labels[r] << ',';
    const auto &row = t.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

json table_to_json(const Table &t) {
  json rows = json::array();
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto &row = t.rows[k];
    json r = json::object();
    if (!t.label_column.empty()) r[t.label_column] = t.labels[k];
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      r[t.columns[i]] = std::isfinite(row[i]) ? json(row[i]) : json(nullptr);
    }
    rows.push_back(std::move(r));
  }
  return {{"schema", t.schema}, {"version", kSchemaVersion}, {"rows", rows}};
}

BatteryHamiltonian make_battery(const BatterySpec &spec, std::optional<double> b) {
  if (spec.kind == BatterySpec::Kind::ising) return ising_battery(spec.J1, spec.J2, spec.J3, b.value_or(spec.b));
  return BatteryHamiltonian::from_parts(spec.HA, spec.HB, spec.V, spec.g);
}

DensityMatrix make_state(const StateSpec &spec, const BatteryHamiltonian &h, std::optional<double> alpha) {
  const int d = h.d();
  switch (spec.kind) {
  case StateSpec::Kind::thermal_mixture:
    return thermal_mixture_state(alpha.value_or(spec.alpha), gibbs_state(h.HA(), spec.T), gibbs_state(h.HB(), spec.T));
  case StateSpec::Kind::matrix:
    if (spec.rho.rows() != d * d) config_error("state.matrix", "state dimension does not match the battery");
    return DensityMatrix(spec.rho);
  case StateSpec::Kind::maximally_mixed: return DensityMatrix::maximally_mixed(d * d);
  case StateSpec::Kind::pure:
    if (spec.psi.size() != d * d) config_error("state.pure", "state dimension does not match the battery");
    return DensityMatrix::from_pure(spec.psi);
  }
  config_error("state", "unsupported state family");
}

SamplerConfig sampler_for(const ExperimentConfig &cfg, int d, std::uint64_t stream_offset) {
  if (!cfg.seed) config_error("sampling.seed", "a seed is required for Monte-Carlo runs (pass --seed)");
  return {d, *cfg.seed, cfg.stream + stream_offset};
}

RunOutput run_variance(const ExperimentConfig &cfg) {
  const BatteryHamiltonian h = make_battery(cfg.battery);
  const DensityMatrix rho = make_state(cfg.state, h);
  const WorkStatistics exact = analytic_work_variance(rho, h);
  RunOutput out;
  out.table.schema = "variance";
  out.table.columns = {"variance", "mean", "variance_mc", "se_variance_mc", "mean_mc", "se_mean_mc", "n_samples"};
  std::vector<double> row = {exact.variance, exact.mean, kNaN, kNaN, kNaN, kNaN, 0.0};
  out.summary = {{"inputs", echo_inputs(cfg)}, {"analytic", exact}};
  if (mc_requested(cfg)) {
    const WorkStatistics mc = mc_work_statistics(rho, h, cfg.n_unitaries, sampler_for(cfg, h.d()));
    row = {exact.variance, exact.mean, mc.variance, mc.se_variance, mc.mean, mc.se_mean,
           static_cast<double>(mc.n_samples)};
    out.summary["monte_carlo"] = mc;
  }
  out.table.rows.push_back(row);
  return out;
}

RunOutput run_witness(const ExperimentConfig &cfg) {
  const BatteryHamiltonian h = make_battery(cfg.battery);
  const DensityMatrix rho = make_state(cfg.state, h);
  const WitnessReport r = detect_schmidt_number(rho, h);
  RunOutput out;
  out.table.schema = "witness";
  out.table.columns = {"variance"};
  std::vector<double> row = {r.variance_used};
  for (const Threshold &t : r.thresholds) {
    out.table.columns.push_back("bound_k" + std::to_string(t.k));
    row.push_back(t.bound);
  }
  out.table.columns.insert(out.table.columns.end(), {"detected_sn", "purity_sn", "ppt_min_eig"});
  row.insert(row.end(), {static_cast<double>(r.detected_sn_lower_bound), static_cast<double>(r.purity_sn_lower_bound),
                         r.ppt_min_eig});
  out.table.rows.push_back(row);
  out.summary = {{"inputs", echo_inputs(cfg)}, {"report", r}};
  return out;
}

RunOutput run_histogram(const ExperimentConfig &cfg) {
  if (cfg.n_unitaries < 1) config_error("sampling.n_unitaries", "histogram needs at least one sample");
  if (!(cfg.bin_width > 0.0)) config_error("histogram.bin_width", "must be > 0");
  const BatteryHamiltonian h = make_battery(cfg.battery);
  const DensityMatrix rho = make_state(cfg.state, h);
  const WorkHistogram hist = work_histogram(rho, h, cfg.n_unitaries, cfg.bin_width, sampler_for(cfg, h.d()));
  const WorkStatistics exact = analytic_work_variance(rho, h);
  const WitnessReport w = detect_schmidt_number(rho, h);

  RunOutput out;
  out.table.schema = "histogram";
  out.table.columns = {"bin_left", "bin_right", "count"};
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    const double left = hist.origin + static_cast<double>(i) * hist.bin_width;
    out.table.rows.push_back({left, left + hist.bin_width, static_cast<double>(hist.counts[i])});
  }
  const double se = hist.moments.se_variance();
  out.summary = {{"inputs", echo_inputs(cfg)},
                 {"histogram", hist},
                 {"analytic", exact},
                 {"variance_deviation_se", std::abs(hist.moments.variance() - exact.variance) / std::max(se, 1e-300)},
                 {"thresholds", w.thresholds}};
  out.summary["histogram"].erase("counts");
  return out;
}

RunOutput run_tpm(const ExperimentConfig &cfg) {
  const BatteryHamiltonian h = make_battery(cfg.battery);
  const DensityMatrix rho = make_state(cfg.state, h);
  const SpectralDecomposition spec = spectral_decomposition(h);
  const TpmVarianceReport r = tpm_variance_closed_form(rho, spec, cfg.epsA, cfg.epsB);
  RunOutput out;
  out.table.schema = "tpm";
  out.table.columns = {"eps_a", "eps_b", "var_tpm", "var_d", "var_proj", "var_noisy", "n0", "n1", "n_noisy",
                       "mean_tpm", "var_tpm_mc", "se_var_tpm_mc", "mean_tpm_mc", "se_mean_tpm_mc"};
  std::vector<double> row = {cfg.epsA, cfg.epsB, r.varTPM, r.varD, r.varProj, r.varNoisy, r.weights.n0,
                             r.weights.n1, r.weights.nNoisy, r.meanTPM, kNaN, kNaN, kNaN, kNaN};
  out.summary = {{"inputs", echo_inputs(cfg)}, {"closed_form", r}};
  if (mc_requested(cfg)) {
    const WorkStatistics mc =
        mc_tpm_statistics(rho, spec, cfg.epsA, cfg.epsB, cfg.n_unitaries, sampler_for(cfg, h.d()));
    row[10] = mc.variance;
    row[11] = mc.se_variance;
    row[12] = mc.mean;
    row[13] = mc.se_mean;
    out.summary["monte_carlo"] = mc;
  }
  out.table.rows.push_back(row);
  return out;
}

RunOutput run_coincidence(const ExperimentConfig &cfg) {
  const BatteryHamiltonian h = make_battery(cfg.battery);
  const DensityMatrix rho = make_state(cfg.state, h);
  const SpectralDecomposition spec = spectral_decomposition(h);
  RunOutput out;
  out.table.schema = "coincidence";
  out.table.columns = {"eps_a", "eps_b", "cbar_closed", "cbar_mc", "se_cbar_mc", "obs4_lhs", "obs4_rhs", "c_term",
                       "h2_min"};
  std::vector<double> row = {cfg.epsA, cfg.epsB, avg_coincidence_closed(rho, spec, cfg.epsA, cfg.epsB),
                             kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
  out.summary = {{"inputs", echo_inputs(cfg)}, {"cbar_closed", row[2]}};
  if (mc_requested(cfg)) {
    const CoincidenceEstimate mc =
        mc_coincidence(rho, spec, cfg.epsA, cfg.epsB, cfg.n_unitaries, sampler_for(cfg, h.d()));
    row[3] = mc.mean;
    row[4] = mc.se;
    out.summary["monte_carlo"] = mc;
  }
  // The coincidence bound is stated for one common efficiency and nonzero fields.
  if (cfg.epsA == cfg.epsB && std::min(h.hA2(), h.hB2()) > 0.0) {
    CoincidenceReport r = obs4_bound(rho, h, spec, cfg.epsA);
    row[5] = r.obs4_lhs;
    row[6] = r.obs4_rhs;
    row[7] = r.c_term;
    row[8] = r.h2_min;
    if (!std::isnan(row[3])) r.cbar_mc = CoincidenceEstimate{row[3], row[4], cfg.n_unitaries};
    out.summary["bound"] = r;
  }
  out.table.rows.push_back(row);
  return out;
}

RunOutput run_variance_sweep(const ExperimentConfig &cfg) {
  const std::vector<double> bs = b_values(cfg, 21);
  const std::vector<double> alphas = alpha_values(cfg, 51);
  const int d = make_battery(cfg.battery, opt(bs.front())).d();

  RunOutput out;
  out.table.schema = "variance-sweep";
  out.table.columns = {"b", "alpha", "T", "variance"};
  for (int k = 1; k <= d; ++k) out.table.columns.push_back("bound_k" + std::to_string(k));
  out.table.columns.insert(out.table.columns.end(), {"detected_sn", "ppt_min_eig"});

  const double T = cfg.state.kind == StateSpec::Kind::thermal_mixture ? cfg.state.T : kNaN;
  parallel_rows(bs.size() * alphas.size(), out.table.rows, [&](std::size_t idx) {
    const double b = bs[idx / alphas.size()];
    const double alpha = alphas[idx % alphas.size()];
    const BatteryHamiltonian h = make_battery(cfg.battery, opt(b));
    const DensityMatrix rho = make_state(cfg.state, h, opt(alpha));
    const WitnessReport r = detect_schmidt_number(rho, h);
    std::vector<double> row = {b, alpha, T, r.variance_used};
    for (const Threshold &t : r.thresholds) row.push_back(t.bound);
    row.push_back(r.detected_sn_lower_bound);
    row.push_back(r.ppt_min_eig);
    return row;
  });
  out.summary = {{"inputs", echo_inputs(cfg)}, {"rows", out.table.rows.size()}};
  return out;
}

RunOutput run_tpm_sweep(const ExperimentConfig &cfg) {
  const std::vector<double> alphas = alpha_values(cfg, 51);
  std::vector<std::pair<double, double>> eps;
  if (!cfg.eps_grid.empty()) {
    for (double e : cfg.eps_grid) eps.emplace_back(e, e);
  } else {
    eps = {{0.2, 0.2}, {0.5, 0.5}, {1.0, 1.0}};
  }
  const BatteryHamiltonian h = make_battery(cfg.battery);
  const SpectralDecomposition spec = spectral_decomposition(h);
  const bool mc = cfg.mc_columns && mc_requested(cfg);
  if (mc) sampler_for(cfg, h.d());

  RunOutput out;
  out.table.schema = "tpm-sweep";
  out.table.columns = {"alpha", "eps_a", "eps_b", "var_tpm", "var_d", "var_proj", "var_noisy",
                       "n0", "n1", "n_noisy", "mean_tpm"};
  if (mc) out.table.columns.insert(out.table.columns.end(), {"stream", "var_tpm_mc", "se_var_tpm_mc"});

  parallel_rows(alphas.size() * eps.size(), out.table.rows, [&](std::size_t idx) {
    const double alpha = alphas[idx / eps.size()];
    const auto [ea, eb] = eps[idx % eps.size()];
    const DensityMatrix rho = make_state(cfg.state, h, opt(alpha));
    const TpmVarianceReport r = tpm_variance_closed_form(rho, spec, ea, eb);
    std::vector<double> row = {alpha, ea, eb, r.varTPM, r.varD, r.varProj, r.varNoisy,
                               r.weights.n0, r.weights.n1, r.weights.nNoisy, r.meanTPM};
    if (mc) {
      const SamplerConfig sc = sampler_for(cfg, h.d(), idx);
      const WorkStatistics s = mc_tpm_statistics(rho, spec, ea, eb, cfg.n_unitaries, sc);
      row.insert(row.end(), {static_cast<double>(sc.stream), s.variance, s.se_variance});
    }
    return row;
  });
  out.summary = {{"inputs", echo_inputs(cfg)}, {"rows", out.table.rows.size()}};
  return out;
}

RunOutput run_sweep(const ExperimentConfig &cfg) {
  return cfg.protocol == Protocol::tpm ? run_tpm_sweep(cfg) : run_variance_sweep(cfg);
}

RunOutput run_verify(const ExperimentConfig &cfg) {
  const int d = cfg.verify_d;
  check_local_dim(d);
  const std::size_t n = cfg.verify_n;
  if (n < 2) config_error("verify.n", "need at least two samples");
  const std::uint64_t seed = cfg.seed.value_or(kDefaultVerifySeed);
  const double k = cfg.verify_tolerance_se;
  RandomStream rng(seed, 0xfeedULL);
  auto sampler = [&](std::uint64_t stream) { return SamplerConfig{d, seed, cfg.stream + stream}; };

  std::vector<Check> checks;

  {
    const Mat x = random_hermitian(d, rng);
    Check c = bound_check("twirl1_vs_mc", max_se_ratio(mc_twirl1(x, n, sampler(1)), twirl1(x), 1.0), k);
    c.unit = "standard errors";
    checks.push_back(c);
  }
  {
    const Mat x = random_hermitian(d * d, rng);
    Check c = bound_check("twirl2_vs_mc", max_se_ratio(mc_twirl2(x, n, sampler(2)), twirl2(x), 1.0), k);
    c.unit = "standard errors";
    checks.push_back(c);
  }
  {
    const DensityMatrix rho = random_density_matrix(d * d, rng);
    Check c = bound_check("phi_vs_mc", max_se_ratio(mc_phi(rho, n, sampler(3)), phi_map(rho, d), 1.0), k);
    c.unit = "standard errors";
    checks.push_back(c);
  }

  const BatteryHamiltonian h = random_battery(d, rng);
  const DensityMatrix rho = random_density_matrix(d * d, rng);
  {
    const WorkStatistics exact = analytic_work_variance(rho, h);
    const WorkStatistics mc = mc_work_statistics(rho, h, n, sampler(4));
    checks.push_back(se_check("work_mean_vs_mc", mc.mean, exact.mean, mc.se_mean, k));
    checks.push_back(se_check("work_variance_vs_mc", mc.variance, exact.variance, mc.se_variance, k));
  }
  const SpectralDecomposition spec = spectral_decomposition(h);
  {
    const double ea = 0.4, eb = 0.7;
    const TpmVarianceReport cf = tpm_variance_closed_form(rho, spec, ea, eb);
    const WorkStatistics mc = mc_tpm_statistics(rho, spec, ea, eb, n, sampler(5));
    checks.push_back(se_check("tpm_mean_vs_mc", mc.mean, cf.meanTPM, mc.se_mean, k));
    checks.push_back(se_check("tpm_variance_vs_mc", mc.variance, cf.varTPM, mc.se_variance, k));
  }
  {
    const double ea = 0.6, eb = 0.9;
    const CoincidenceEstimate mc = mc_coincidence(rho, spec, ea, eb, n, sampler(6));
    checks.push_back(se_check("coincidence_vs_mc", mc.mean, avg_coincidence_closed(rho, spec, ea, eb), mc.se, k));
  }

  double worst_ineq = -std::numeric_limits<double>::infinity();
  double worst_closing = 0.0, worst_tpm = -std::numeric_limits<double>::infinity();
  double worst_obs4 = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix s = random_density_matrix(d * d, rng, 1 + i % (d * d));
    const TpmSpectralStats st = tpm_spectral_stats(s, spec);
    const SectorLengths &q = st.sectors;
    worst_ineq = std::max({worst_ineq, d * st.pA2 - 1.0 - q.rA2, d * st.pB2 - 1.0 - q.rB2, st.qAB - q.t2,
                           st.zA - q.t2, st.zB - q.t2});
    worst_closing = std::max(worst_closing, std::abs(st.zAB - st.qAB));
    const double ea = rng.uniform(), eb = rng.uniform();
    const TpmVarianceReport cf = tpm_variance_closed_form(s, spec, ea, eb);
    worst_tpm = std::max(worst_tpm, cf.varTPM - cf.varD);
    const CoincidenceReport r = obs4_bound(s, h, spec, rng.uniform());
    worst_obs4 = std::max(worst_obs4, r.obs4_lhs - r.obs4_rhs);
  }
  checks.push_back(bound_check("proof_inequalities", worst_ineq, 1e-10));
  checks.push_back(bound_check("zeta_closing_identity", worst_closing, 1e-10));
  checks.push_back(bound_check("tpm_variance_below_ideal", worst_tpm, 1e-12));
  checks.push_back(bound_check("coincidence_bound", worst_obs4, 1e-12));

  double worst_weights = 0.0;
  for (double ea : linspace(0.0, 1.0, 101)) {
    for (double eb : {0.0, 0.3, 1.0, ea}) {
      const TpmWeights w = tpm_weights(ea, eb, d);
      worst_weights = std::max(worst_weights, std::abs(w.n0 + w.n1 + w.nNoisy - 1.0));
    }
  }
  checks.push_back(bound_check("weights_sum_to_one", worst_weights, 1e-12));

  RunOutput out;
  out.passed = std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
  out.table.schema = "verify";
  out.table.label_column = "check";
  out.table.columns = {"passed", "deviation", "tolerance"};
  for (const Check &c : checks) {
    out.table.labels.push_back(c.name);
    out.table.rows.push_back({c.passed ? 1.0 : 0.0, c.deviation, c.tolerance});
  }
  out.summary = {{"d", d}, {"n", n}, {"seed", seed}, {"tolerance_se", k}, {"checks", checks}, {"passed", out.passed}};
  return out;
}

} // namespace qbattery
