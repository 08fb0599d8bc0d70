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


#include "qbattery/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

namespace qbattery {
namespace {

[[noreturn]] void fail(const std::string &path, const std::string &msg) {
  throw Error(ErrorKind::config, "key '" + path + "': " + msg);
}

std::string join(const std::string &prefix, const std::string &key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_object(const json &j, const std::string &path, std::initializer_list<const char *> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto &[key, _] : j.items()) {
    if (!ok.count(key)) fail(join(path, key), "unknown key");
  }
}

double get_number(const json &j, const std::string &key, const std::string &path, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) fail(join(path, key), "expected a number");
  return j.at(key).get<double>();
}

std::uint64_t get_count(const json &j, const std::string &key, const std::string &path, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json &v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x >= 0.0 && x == std::floor(x) && x < 1.8e19) return static_cast<std::uint64_t>(x);
  }
  fail(join(path, key), "expected a non-negative integer");
}

// The single key of a one-entry object, e.g. {"ising": {...}}.
std::string family_of(const json &j, const std::string &path) {
  if (!j.is_object() || j.size() != 1) fail(path, "expected an object with exactly one family key");
  return j.begin().key();
}

std::vector<double> parse_grid(const json &j, const std::string &path) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const json &x : j) {
      if (!x.is_number()) fail(path, "grid entries must be numbers");
      out.push_back(x.get<double>());
    }
    if (out.empty()) fail(path, "grid must not be empty");
    return out;
  }
  if (j.is_object()) {
    check_object(j, path, {"from", "to", "count"});
    if (!j.contains("from") || !j.contains("to") || !j.contains("count")) {
      fail(path, "range needs 'from', 'to' and 'count'");
    }
    const std::uint64_t count = get_count(j, "count", path, 0);
    if (count == 0) fail(join(path, "count"), "grid must not be empty");
    return linspace(get_number(j, "from", path, 0.0), get_number(j, "to", path, 0.0), count);
  }
  fail(path, "expected a list or a {from, to, count} range");
}

BatterySpec parse_battery(const json &j) {
  const std::string path = "battery";
  BatterySpec b;
  const std::string family = family_of(j, path);
  const json &body = j.at(family);
  const std::string sub = join(path, family);
  if (family == "ising") {
    check_object(body, sub, {"J1", "J2", "J3", "b"});
    b.kind = BatterySpec::Kind::ising;
    b.J1 = get_number(body, "J1", sub, b.J1);
    b.J2 = get_number(body, "J2", sub, b.J2);
    b.J3 = get_number(body, "J3", sub, b.J3);
    b.b = get_number(body, "b", sub, b.b);
  } else if (family == "explicit") {
    check_object(body, sub, {"HA", "HB", "V", "g"});
    for (const char *k : {"HA", "HB", "V"}) {
      if (!body.contains(k)) fail(join(sub, k), "missing");
    }
    b.kind = BatterySpec::Kind::explicit_matrices;
    b.HA = matrix_from_json(body.at("HA"), join(sub, "HA"));
    b.HB = matrix_from_json(body.at("HB"), join(sub, "HB"));
    b.V = matrix_from_json(body.at("V"), join(sub, "V"));
    b.g = get_number(body, "g", sub, b.g);
  } else {
    fail(sub, "unknown battery family (expected 'ising' or 'explicit')");
  }
  return b;
}

StateSpec parse_state(const json &j) {
  const std::string path = "state";
  StateSpec s;
  const std::string family = family_of(j, path);
  const json &body = j.at(family);
  const std::string sub = join(path, family);
  if (family == "thermal_mixture") {
    check_object(body, sub, {"alpha", "T"});
    s.kind = StateSpec::Kind::thermal_mixture;
    s.alpha = get_number(body, "alpha", sub, s.alpha);
    s.T = get_number(body, "T", sub, s.T);
  } else if (family == "matrix") {
    s.kind = StateSpec::Kind::matrix;
    s.rho = matrix_from_json(body, sub);
  } else if (family == "maximally_mixed") {
    check_object(body, sub, {});
    s.kind = StateSpec::Kind::maximally_mixed;
  } else if (family == "pure") {
    if (!body.is_array() || body.empty()) fail(sub, "expected a list of amplitudes");
    s.kind = StateSpec::Kind::pure;
    s.psi.resize(static_cast<Eigen::Index>(body.size()));
    for (std::size_t i = 0; i < body.size(); ++i) {
      const Mat e = matrix_from_json(json::array({body[i]}), sub);
      s.psi(static_cast<Eigen::Index>(i)) = e(0, 0);
    }
  } else {
    fail(sub, "unknown state family (expected 'thermal_mixture', 'matrix', 'maximally_mixed' or 'pure')");
  }
  return s;
}

} // namespace

const char *to_string(Protocol p) {
  switch (p) {
  case Protocol::variance: return "variance";
  case Protocol::witness: return "witness";
  case Protocol::histogram: return "histogram";
  case Protocol::tpm: return "tpm";
  case Protocol::coincidence: return "coincidence";
  case Protocol::verify: return "verify";
  }
  return "variance";
}

const char *to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

Protocol protocol_from_string(const std::string &s) {
  for (Protocol p : {Protocol::variance, Protocol::witness, Protocol::histogram, Protocol::tpm,
                     Protocol::coincidence, Protocol::verify}) {
    if (s == to_string(p)) return p;
  }
  fail("protocol", "unknown protocol '" + s + "'");
}

OutputFormat format_from_string(const std::string &s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  fail("output.format", "expected 'csv' or 'json', got '" + s + "'");
}

std::vector<double> linspace(double from, double to, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = from;
    return out;
  }
  const double step = (to - from) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = from + step * static_cast<double>(i);
  out.back() = to;
  return out;
}

ExperimentConfig config_from_json(const json &j) {
  check_object(j, "", {"protocol", "battery", "state", "grid", "measurement", "sampling", "histogram", "verify",
                       "output"});
  ExperimentConfig c;
  if (j.contains("protocol")) {
    if (!j.at("protocol").is_string()) fail("protocol", "expected a string");
    c.protocol = protocol_from_string(j.at("protocol").get<std::string>());
  }
  if (j.contains("battery")) c.battery = parse_battery(j.at("battery"));
  if (j.contains("state")) c.state = parse_state(j.at("state"));

  if (j.contains("grid")) {
    const json &g = j.at("grid");
    check_object(g, "grid", {"b", "alpha", "eps"});
    if (g.contains("b")) c.b_grid = parse_grid(g.at("b"), "grid.b");
    if (g.contains("alpha")) c.alpha_grid = parse_grid(g.at("alpha"), "grid.alpha");
    if (g.contains("eps")) c.eps_grid = parse_grid(g.at("eps"), "grid.eps");
  }
  if (j.contains("measurement")) {
    const json &m = j.at("measurement");
    check_object(m, "measurement", {"eps_a", "eps_b"});
    c.epsA = get_number(m, "eps_a", "measurement", c.epsA);
    c.epsB = get_number(m, "eps_b", "measurement", c.epsB);
  }
  if (j.contains("sampling")) {
    const json &s = j.at("sampling");
    check_object(s, "sampling", {"n_unitaries", "seed", "stream", "mc_columns"});
    c.n_unitaries = get_count(s, "n_unitaries", "sampling", c.n_unitaries);
    if (s.contains("seed")) c.seed = get_count(s, "seed", "sampling", 0);
    c.stream = get_count(s, "stream", "sampling", c.stream);
    if (s.contains("mc_columns")) {
      if (!s.at("mc_columns").is_boolean()) fail("sampling.mc_columns", "expected true or false");
      c.mc_columns = s.at("mc_columns").get<bool>();
    }
  }
  if (j.contains("histogram")) {
    const json &h = j.at("histogram");
    check_object(h, "histogram", {"bin_width"});
    c.bin_width = get_number(h, "bin_width", "histogram", c.bin_width);
    if (!(c.bin_width > 0.0)) fail("histogram.bin_width", "must be > 0");
  }
  if (j.contains("verify")) {
    const json &v = j.at("verify");
    check_object(v, "verify", {"d", "n", "tolerance_se"});
    c.verify_d = static_cast<int>(get_count(v, "d", "verify", static_cast<std::uint64_t>(c.verify_d)));
    c.verify_n = get_count(v, "n", "verify", c.verify_n);
    c.verify_tolerance_se = get_number(v, "tolerance_se", "verify", c.verify_tolerance_se);
  }
  if (j.contains("output")) {
    const json &o = j.at("output");
    check_object(o, "output", {"path", "format"});
    if (o.contains("path")) {
      if (!o.at("path").is_string()) fail("output.path", "expected a string");
      c.out_path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      if (!o.at("format").is_string()) fail("output.format", "expected a string");
      c.format = format_from_string(o.at("format").get<std::string>());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error &e) {
    throw Error(ErrorKind::config, "'" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig &c) {
  json j;
  j["protocol"] = to_string(c.protocol);
  if (c.battery.kind == BatterySpec::Kind::ising) {
    j["battery"] = {{"ising", {{"J1", c.battery.J1}, {"J2", c.battery.J2}, {"J3", c.battery.J3}, {"b", c.battery.b}}}};
  } else {
    j["battery"] = {{"explicit",
                     {{"HA", matrix_to_json(c.battery.HA)},
                      {"HB", matrix_to_json(c.battery.HB)},
                      {"V", matrix_to_json(c.battery.V)},
                      {"g", c.battery.g}}}};
  }
  switch (c.state.kind) {
  case StateSpec::Kind::thermal_mixture:
    j["state"] = {{"thermal_mixture", {{"alpha", c.state.alpha}, {"T", c.state.T}}}};
    break;
  case StateSpec::Kind::matrix: j["state"] = {{"matrix", matrix_to_json(c.state.rho)}}; break;
  case StateSpec::Kind::maximally_mixed: j["state"] = {{"maximally_mixed", json::object()}}; break;
  case StateSpec::Kind::pure: {
    json amps = json::array();
    for (Eigen::Index i = 0; i < c.state.psi.size(); ++i) amps.push_back({c.state.psi(i).real(), c.state.psi(i).imag()});
    j["state"] = {{"pure", amps}};
    break;
  }
  }
  json grid = json::object();
  if (!c.b_grid.empty()) grid["b"] = c.b_grid;
  if (!c.alpha_grid.empty()) grid["alpha"] = c.alpha_grid;
  if (!c.eps_grid.empty()) grid["eps"] = c.eps_grid;
  j["grid"] = grid;
  j["measurement"] = {{"eps_a", c.epsA}, {"eps_b", c.epsB}};
  j["sampling"] = {{"n_unitaries", c.n_unitaries}, {"stream", c.stream}, {"mc_columns", c.mc_columns}};
  if (c.seed) j["sampling"]["seed"] = *c.seed;
  j["histogram"] = {{"bin_width", c.bin_width}};
  j["verify"] = {{"d", c.verify_d}, {"n", c.verify_n}, {"tolerance_se", c.verify_tolerance_se}};
  j["output"] = {{"path", c.out_path}, {"format", to_string(c.format)}};
  return j;
}

} // namespace qbattery
