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


#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "qbattery/runner.hpp"

using namespace qbattery;

namespace {

std::string config_error_of(const json &j) {
  try {
    config_from_json(j);
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::config);
    return e.what();
  }
  return "";
}

std::size_t column(const Table &t, const std::string &name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

json full_config() {
  return json::parse(R"({
    "protocol": "tpm",
    "battery": {"ising": {"J1": 0.4, "J2": 1.0, "J3": 0.6, "b": 0.3}},
    "state": {"thermal_mixture": {"alpha": 0.7, "T": 2.0}},
    "grid": {"b": [0.1, 0.2], "alpha": {"from": 0, "to": 1, "count": 5}, "eps": [0.25, 0.75]},
    "measurement": {"eps_a": 0.3, "eps_b": 0.6},
    "sampling": {"n_unitaries": 1234, "seed": 42, "stream": 7, "mc_columns": true},
    "histogram": {"bin_width": 0.05},
    "verify": {"d": 3, "n": 500, "tolerance_se": 4.5},
    "output": {"path": "x.csv", "format": "json"}
  })");
}

} // namespace

TEST_CASE("linspace") {
  const auto g = linspace(0.0, 1.0, 21);
  REQUIRE(g.size() == 21);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[9] == doctest::Approx(0.45));
  CHECK(linspace(0.3, 0.9, 1) == std::vector<double>{0.3});
}

TEST_CASE("config parsing and round trip") {
  const ExperimentConfig c = config_from_json(full_config());
  CHECK(c.protocol == Protocol::tpm);
  CHECK(c.battery.J1 == 0.4);
  CHECK(c.state.T == 2.0);
  CHECK(c.alpha_grid.size() == 5);
  CHECK(c.alpha_grid[2] == 0.5);
  CHECK(c.epsA == 0.3);
  CHECK(c.seed == 42u);
  CHECK(c.stream == 7u);
  CHECK(c.mc_columns);
  CHECK(c.verify_d == 3);
  CHECK(c.format == OutputFormat::json);
  const json once = config_to_json(c);
  CHECK(config_to_json(config_from_json(once)) == once);

  json ex = json::parse(R"({
    "battery": {"explicit": {"HA": [[1, 0], [0, -1]], "HB": [[0, [0, -1]], [[0, 1], 0]],
                             "V": [1,0,0,0, 0,-1,0,0, 0,0,-1,0, 0,0,0,1], "g": 0.5}},
    "state": {"pure": [[0.6, 0], 0, 0, [0, 0.8]]}
  })");
  const ExperimentConfig e = config_from_json(ex);
  CHECK(e.battery.kind == BatterySpec::Kind::explicit_matrices);
  CHECK(e.battery.HB(0, 1) == cplx(0, -1));
  CHECK(e.battery.V.rows() == 4);
  CHECK(e.state.psi(3) == cplx(0, 0.8));
  const json e1 = config_to_json(e);
  CHECK(config_to_json(config_from_json(e1)) == e1);

  const ExperimentConfig m = config_from_json(json::parse(R"({"state": {"maximally_mixed": {}}})"));
  CHECK(m.state.kind == StateSpec::Kind::maximally_mixed);
  CHECK_FALSE(m.seed.has_value());
  CHECK(m.n_unitaries == 100000);
}

TEST_CASE("config errors name the offending key") {
  CHECK(config_error_of(json::parse(R"({"bogus": 1})")).find("'bogus'") != std::string::npos);
  CHECK(config_error_of(json::parse(R"({"sampling": {"seed": "x"}})")).find("'sampling.seed'") != std::string::npos);
  CHECK(config_error_of(json::parse(R"({"sampling": {"sed": 1}})")).find("'sampling.sed'") != std::string::npos);
  CHECK(config_error_of(json::parse(R"({"grid": {"alpha": {"from": 0, "to": 1, "count": 0}}})"))
            .find("grid.alpha") != std::string::npos);
  CHECK(config_error_of(json::parse(R"({"grid": {"b": []}})")).find("grid.b") != std::string::npos);
  CHECK(config_error_of(json::parse(R"({"protocol": "nope"})")).find("protocol") != std::string::npos);
  CHECK(config_error_of(json::parse(R"({"state": {"gas": {}}})")).find("state") != std::string::npos);
  CHECK(config_error_of(json::parse(R"({"battery": {"ising": {"J4": 1}}})")).find("battery.ising.J4") !=
        std::string::npos);
  CHECK(config_error_of(json::parse(R"({"output": {"format": "xml"}})")).find("format") != std::string::npos);
  CHECK(config_error_of(json::parse(R"({"battery": {"explicit": {"HA": [[1, 0], [0]], "HB": [[1]], "V": [[1]]}}})"))
            .find("battery.explicit.HA") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/qbattery.json"), Error);
}

TEST_CASE("load config from file") {
  const std::string path = "qbattery_test_config.json";
  {
    std::ofstream out(path);
    out << full_config().dump(2);
  }
  CHECK(config_to_json(load_config(path)) == config_to_json(config_from_json(full_config())));
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_config(path), Error);
  std::remove(path.c_str());
}

TEST_CASE("matrix json") {
  Mat m(2, 2);
  m << cplx(1, 2), 3, cplx(0, -1), 4;
  const json j = matrix_to_json(m);
  CHECK((matrix_from_json(j, "m") - m).norm() == 0.0);
  const Mat flat = matrix_from_json(json::parse("[[1, 2], 3, [0, -1], 4]"), "m");
  CHECK((flat - m).norm() == 0.0);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[1, 2, 3]"), "m"), Error);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1, 2], [3]]"), "m"), Error);
  CHECK_THROWS_AS(matrix_from_json(json::parse("\"abc\""), "m"), Error);
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678, 0.0}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(0.5).find(',') == std::string::npos);
}

TEST_CASE("monte carlo runs need a seed") {
  ExperimentConfig c;
  try {
    sampler_for(c, 2);
    FAIL("expected config error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(std::string(e.what()).find("sampling.seed") != std::string::npos);
  }
  CHECK_THROWS_AS(run_variance(c), Error);
  c.n_unitaries = 0;
  CHECK_NOTHROW(run_variance(c));
  c.seed = 3;
  c.stream = 2;
  const SamplerConfig s = sampler_for(c, 4, 5);
  CHECK(s.seed == 3u);
  CHECK(s.stream == 7u);
}

TEST_CASE("grid of size one matches the direct call") {
  ExperimentConfig c;
  c.b_grid = {0.45};
  c.alpha_grid = {0.96};
  const RunOutput out = run_variance_sweep(c);
  REQUIRE(out.table.rows.size() == 1);
  const auto &row = out.table.rows[0];
  const BatteryHamiltonian h = ising_battery(0.5, 1.0, 0.5, 0.45);
  const DensityMatrix rho = thermal_mixture_state(0.96, gibbs_state(h.HA(), 1.5), gibbs_state(h.HB(), 1.5));
  const WitnessReport r = detect_schmidt_number(rho, h);
  CHECK(row[column(out.table, "variance")] == r.variance_used);
  CHECK(row[column(out.table, "bound_k3")] == r.thresholds[2].bound);
  CHECK(row[column(out.table, "detected_sn")] == r.detected_sn_lower_bound);
  CHECK(row[column(out.table, "ppt_min_eig")] == r.ppt_min_eig);

  ExperimentConfig w;
  w.state.alpha = 0.96;
  const RunOutput wo = run_witness(w);
  CHECK(wo.table.rows[0][column(wo.table, "variance")] == r.variance_used);
}

TEST_CASE("default variance sweep") {
  const RunOutput out = run_variance_sweep(ExperimentConfig{});
  CHECK(out.table.rows.size() == 21 * 51);
  const std::size_t cb = column(out.table, "b"), ca = column(out.table, "alpha");
  const std::size_t cv = column(out.table, "variance"), ck3 = column(out.table, "bound_k3");
  const std::size_t csn = column(out.table, "detected_sn");
  bool found = false;
  for (const auto &row : out.table.rows) {
    if (row[ca] == 0.0) CHECK(row[csn] == 1.0);
    if (std::abs(row[cb] - 0.45) < 1e-12 && std::abs(row[ca] - 0.96) < 1e-12) {
      found = true;
      CHECK(row[cv] > row[ck3]);
      CHECK(row[csn] >= 4.0);
    }
  }
  CHECK(found);
  // rows come out in grid order
  for (std::size_t i = 1; i < out.table.rows.size(); ++i) {
    const auto &p = out.table.rows[i - 1], &q = out.table.rows[i];
    CHECK((p[cb] < q[cb] || (p[cb] == q[cb] && p[ca] < q[ca])));
  }
}

TEST_CASE("tpm sweep") {
  ExperimentConfig c;
  c.protocol = Protocol::tpm;
  const RunOutput out = run_sweep(c);
  CHECK(out.table.schema == "tpm-sweep");
  CHECK(out.table.rows.size() == 51 * 3);
  const std::size_t n0 = column(out.table, "n0"), n1 = column(out.table, "n1"), nn = column(out.table, "n_noisy");
  const std::size_t ce = column(out.table, "eps_a"), cv = column(out.table, "var_tpm"),
                    cp = column(out.table, "var_proj");
  for (std::size_t i = 0; i < out.table.rows.size(); ++i) {
    const auto &row = out.table.rows[i];
    CHECK(std::abs(row[n0] + row[n1] + row[nn] - 1.0) < 1e-12);
    if (row[ce] == 1.0) CHECK(row[cv] == doctest::Approx(row[cp]).epsilon(1e-12));
    if (row[ce] == 0.2) {
      // equal curves at alpha = 0, up to rounding
      const double next = out.table.rows[i + 1][cv];
      CHECK(row[cv] >= next - 1e-14 * next);
    }
  }

  // any row is reproducible from its echoed parameters
  const auto &row = out.table.rows[77];
  const BatteryHamiltonian h = ising_battery(0.5, 1.0, 0.5, 0.45);
  const DensityMatrix rho = thermal_mixture_state(row[0], gibbs_state(h.HA(), 1.5), gibbs_state(h.HB(), 1.5));
  const TpmVarianceReport r = tpm_variance_closed_form(rho, spectral_decomposition(h), row[1], row[2]);
  CHECK(row[cv] == r.varTPM);

  c.mc_columns = true;
  c.n_unitaries = 200;
  CHECK_THROWS_AS(run_sweep(c), Error);
  c.seed = 5;
  c.alpha_grid = {0.5};
  c.eps_grid = {0.4};
  const RunOutput mc = run_tpm_sweep(c);
  REQUIRE(mc.table.rows.size() == 1);
  const auto &m = mc.table.rows[0];
  const SamplerConfig sc{4, 5, static_cast<std::uint64_t>(m[column(mc.table, "stream")])};
  const DensityMatrix r5 = thermal_mixture_state(0.5, gibbs_state(h.HA(), 1.5), gibbs_state(h.HB(), 1.5));
  const WorkStatistics s = mc_tpm_statistics(r5, spectral_decomposition(h), 0.4, 0.4, 200, sc);
  CHECK(m[column(mc.table, "var_tpm_mc")] == s.variance);
}

TEST_CASE("single-point runners") {
  ExperimentConfig c;
  c.seed = 11;
  c.n_unitaries = 4000;
  const RunOutput v = run_variance(c);
  CHECK(v.table.rows[0][column(v.table, "n_samples")] == 4000.0);
  CHECK(v.summary.contains("monte_carlo"));

  c.epsA = c.epsB = 0.5;
  const RunOutput t = run_tpm(c);
  const auto &tr = t.table.rows[0];
  CHECK(std::abs(tr[column(t.table, "var_tpm_mc")] - tr[column(t.table, "var_tpm")]) <
        5.0 * tr[column(t.table, "se_var_tpm_mc")]);

  const RunOutput co = run_coincidence(c);
  const auto &cr = co.table.rows[0];
  CHECK(cr[column(co.table, "obs4_lhs")] <= cr[column(co.table, "obs4_rhs")] + 1e-12);
  CHECK(std::abs(cr[column(co.table, "cbar_mc")] - cr[column(co.table, "cbar_closed")]) <
        5.0 * cr[column(co.table, "se_cbar_mc")]);
  c.epsB = 0.7;
  CHECK(std::isnan(run_coincidence(c).table.rows[0][column(co.table, "obs4_rhs")]));
}

TEST_CASE("histogram runner") {
  ExperimentConfig c;
  c.seed = 12;
  c.n_unitaries = 20000;
  c.state.alpha = 0.08;
  const RunOutput out = run_histogram(c);
  double total = 0.0;
  for (const auto &row : out.table.rows) {
    total += row[2];
    CHECK(row[1] - row[0] == doctest::Approx(0.1));
  }
  CHECK(total == 20000.0);
  const double var = out.summary["histogram"]["sample_variance"].get<double>();
  CHECK(var < out.summary["thresholds"][0]["bound"].get<double>());
  CHECK(out.summary["variance_deviation_se"].get<double>() < 5.0);

  c.bin_width = 0.0;
  CHECK_THROWS_AS(run_histogram(c), Error);
}

TEST_CASE("csv and json emission") {
  ExperimentConfig c;
  c.b_grid = {0.45};
  c.alpha_grid = {0.5, 0.96};
  const RunOutput out = run_variance_sweep(c);
  std::ostringstream os;
  write_csv(out.table, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# qbattery variance-sweep v" + std::to_string(kSchemaVersion));
  std::getline(in, line);
  CHECK(line.rfind("b,alpha,T,variance,bound_k1", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
  const json j = table_to_json(out.table);
  CHECK(j["rows"].size() == 2);
  CHECK(j["schema"] == "variance-sweep");
  CHECK(j["rows"][1]["b"].get<double>() == 0.45);
  CHECK(j["rows"][1]["alpha"].get<double>() == 0.96);
}

TEST_CASE("verify suite") {
  ExperimentConfig c;
  c.verify_n = 3000;
  const RunOutput a = run_verify(c);
  CHECK(a.passed);
  CHECK(a.table.labels.size() == a.table.rows.size());
  for (const auto &row : a.table.rows) CHECK(row[0] == 1.0);
  const RunOutput b = run_verify(c);
  CHECK(a.summary.dump() == b.summary.dump());

  c.verify_tolerance_se = 1e-3;
  const RunOutput bad = run_verify(c);
  CHECK_FALSE(bad.passed);
  bool reported = false;
  for (const auto &ch : bad.summary["checks"])
    if (!ch["passed"].get<bool>()) reported |= ch["deviation"].get<double>() > 0.0;
  CHECK(reported);
}
