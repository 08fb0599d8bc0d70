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


#include "qbattery/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace qbattery {
namespace {

[[noreturn]] void fail(const std::string &path, const std::string &msg) {
  throw Error(ErrorKind::config, "key '" + path + "': " + msg);
}

cplx entry_from_json(const json &e, const std::string &path) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  fail(path, "matrix entries must be numbers or [re, im] pairs");
}

bool is_entry(const json &e) { return e.is_number() || (e.is_array() && e.size() == 2 && e[0].is_number()); }

} // namespace

json matrix_to_json(const Mat &m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const json &j, const std::string &path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  // A flat list has a perfect-square length; rows of [re, im] pairs never do
  // for square matrices, so the two layouts cannot collide.
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(j.size()))));
  if (static_cast<std::size_t>(n * n) == j.size() && std::all_of(j.begin(), j.end(), is_entry)) {
    Mat m(n, n);
    for (Eigen::Index k = 0; k < n * n; ++k) m(k / n, k % n) = entry_from_json(j[static_cast<std::size_t>(k)], path);
    return m;
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) fail(path, "expected rows of entries");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json &row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) fail(path, "ragged matrix rows");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = entry_from_json(row[static_cast<std::size_t>(k)], path);
  }
  return m;
}

json vector_to_json(const RVec &v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json real_matrix_to_json(const RMat &m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
  return rows;
}

void to_json(json &j, const SectorLengths &s) { j = {{"rA2", s.rA2}, {"rB2", s.rB2}, {"t2", s.t2}}; }

void to_json(json &j, const WorkStatistics &s) {
  j = {{"mean", s.mean},
       {"variance", s.variance},
       {"n_samples", s.n_samples},
       {"se_mean", s.se_mean},
       {"se_variance", s.se_variance}};
}

void to_json(json &j, const WorkHistogram &h) {
  j = {{"bin_width", h.bin_width},
       {"origin", h.origin},
       {"counts", h.counts},
       {"n_samples", h.n_samples},
       {"sample_mean", h.moments.mean()},
       {"sample_variance", h.moments.variance()},
       {"se_variance", h.moments.se_variance()}};
}

void to_json(json &j, const Threshold &t) { j = {{"k", t.k}, {"bound", t.bound}}; }

void to_json(json &j, const PureStateReport &r) {
  j = {{"d", r.d},
       {"h2", r.h2},
       {"g2v2", r.g2v2},
       {"G", r.G},
       {"t2", r.t2},
       {"variance", r.variance},
       {"t2_thresholds", r.t2_thresholds},
       {"variance_thresholds", r.variance_thresholds},
       {"direction", to_string(r.direction)},
       {"detected_sn_lower_bound", r.detected_sn_lower_bound}};
}

void to_json(json &j, const WitnessReport &r) {
  j = {{"d", r.d},
       {"variance_used", r.variance_used},
       {"sectors", r.sectors},
       {"hA2", r.hA2},
       {"hB2", r.hB2},
       {"g2v2", r.g2v2},
       {"thresholds", r.thresholds},
       {"detected_sn_lower_bound", r.detected_sn_lower_bound},
       {"purity", r.purity},
       {"purity_A", r.purity_A},
       {"purity_B", r.purity_B},
       {"purity_sn_lower_bound", r.purity_sn_lower_bound},
       {"routes_comparable", r.routes_comparable},
       {"routes_agree", r.routes_agree},
       {"ppt_min_eig", r.ppt_min_eig}};
  j["pure_state_branch"] = r.pure_state_branch ? json(*r.pure_state_branch) : json(nullptr);
}

void to_json(json &j, const TpmWeights &w) {
  j = {{"eps_a", w.epsA},     {"eps_b", w.epsB},     {"f_a", w.fA},         {"g_a", w.gA},
       {"f_b", w.fB},         {"g_b", w.gB},         {"kappa_a", w.kappaA}, {"kappa_b", w.kappaB},
       {"kappa_ab", w.kappaAB}, {"gamma_a", w.gammaA}, {"gamma_b", w.gammaB}, {"gamma_ab", w.gammaAB},
       {"n0", w.n0},          {"n1", w.n1},          {"n_noisy", w.nNoisy}};
}

void to_json(json &j, const TpmXiTerms &x) {
  j = {{"xi_ab", x.xiAB}, {"xi_a", x.xiA}, {"xi_b", x.xiB}, {"xi_rho", x.xiRho}, {"cross", x.c}, {"sum", x.sum()}};
}

void to_json(json &j, const TpmVarianceReport &r) {
  j = {{"upsilon_ideal", r.upsilonIdeal},
       {"upsilon_proj", r.upsilonProj},
       {"upsilon_noisy", r.upsilonNoisy},
       {"var_tpm", r.varTPM},
       {"mean_tpm", r.meanTPM},
       {"var_d", r.varD},
       {"var_proj", r.varProj},
       {"var_noisy", r.varNoisy},
       {"weights", r.weights},
       {"xi", r.xi}};
}

void to_json(json &j, const CoincidenceEstimate &e) {
  j = {{"mean", e.mean}, {"se", e.se}, {"n_samples", e.n_samples}};
}

void to_json(json &j, const CoincidenceReport &r) {
  j = {{"eps_a", r.epsA},
       {"eps_b", r.epsB},
       {"cbar_closed", r.cbar_closed},
       {"variance", r.variance},
       {"obs4_lhs", r.obs4_lhs},
       {"obs4_rhs", r.obs4_rhs},
       {"c_term", r.c_term},
       {"h2_min", r.h2_min},
       {"t2", r.t2},
       {"holds", r.holds}};
  j["cbar_mc"] = r.cbar_mc ? json(*r.cbar_mc) : json(nullptr);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

} // namespace qbattery
