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


// End-to-end acceptance run: one [PASS]/[FAIL] line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qbattery/bloch.hpp"
#include "qbattery/coincidence.hpp"
#include "qbattery/random_states.hpp"
#include "qbattery/tpm.hpp"
#include "qbattery/twirl.hpp"
#include "qbattery/witness.hpp"

using namespace qbattery;

namespace {

constexpr double kSe = 5.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Ising {
  BatteryHamiltonian h;
  DensityMatrix tauA, tauB;
  explicit Ising(double b, double T = 1.5)
      : h(ising_battery(0.5, 1.0, 0.5, b)), tauA(gibbs_state(h.HA(), T)), tauB(gibbs_state(h.HB(), T)) {}
  DensityMatrix state(double alpha) const { return thermal_mixture_state(alpha, tauA, tauB); }
};

double se_units(double value, double expected, double se) { return std::abs(value - expected) / se; }

Outcome ac1_twirl() {
  Outcome o;
  RandomStream rng(1001, 0);
  double worst = 0.0;
  for (int D = 2; D <= 4; ++D) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int rep = 0; rep < 10; ++rep) {
      const Mat x = random_hermitian(D * D, rng);
      const MatrixMoments mc = mc_twirl2(x, 100000, {D, 1001, static_cast<std::uint64_t>(10 * D + rep)});
      worst = std::max(worst, max_se_ratio(mc, twirl2(x), kSe));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 60.0) o.pass = false;
    o.detail += fmt("D=%.0f %.1fs; ", D, secs);
  }
  o.pass = o.pass && worst <= 1.0;
  o.detail += fmt("worst |dev|/(5 SE) = %.3f", worst);
  return o;
}

Outcome ac2_variance() {
  Outcome o;
  double worst = 0.0;
  std::uint64_t stream = 0;
  for (double b : {0.0, 0.45, 0.9}) {
    const Ising is(b);
    for (double alpha : {0.08, 0.5, 0.96}) {
      const DensityMatrix rho = is.state(alpha);
      const WorkStatistics mc = mc_work_statistics(rho, is.h, 100000, {4, 1002, stream++});
      worst = std::max(worst, se_units(mc.variance, analytic_work_variance(rho, is.h).variance, mc.se_variance));
    }
  }
  o.pass = worst <= kSe;
  o.detail = fmt("9 grid points, worst deviation %.2f SE", worst);
  return o;
}

Outcome ac3_endpoints() {
  const Ising is(0.45);
  const WitnessReport hi = detect_schmidt_number(is.state(0.96), is.h);
  const WitnessReport lo = detect_schmidt_number(is.state(0.08), is.h);
  Outcome o;
  o.pass = exceeds(hi.variance_used, hi.thresholds[2].bound) && hi.detected_sn_lower_bound >= 4 &&
           !exceeds(lo.variance_used, lo.thresholds[0].bound) && lo.detected_sn_lower_bound == 1;
  o.detail = fmt("alpha=0.96: var %.5f > k3 bound %.5f; ", hi.variance_used, hi.thresholds[2].bound) +
             fmt("alpha=0.08: var %.5f <= k1 bound %.5f", lo.variance_used, lo.thresholds[0].bound);
  return o;
}

Outcome ac4_histogram() {
  const Ising is(0.45);
  Outcome o;
  double var[2], dev[2];
  const double alphas[2] = {0.96, 0.08};
  for (int i = 0; i < 2; ++i) {
    const DensityMatrix rho = is.state(alphas[i]);
    const WorkHistogram h = work_histogram(rho, is.h, 1000000, 0.1, {4, 1004, static_cast<std::uint64_t>(i)});
    std::uint64_t total = 0;
    for (auto c : h.counts) total += c;
    if (total != 1000000) o.pass = false;
    var[i] = h.moments.variance();
    dev[i] = se_units(var[i], analytic_work_variance(rho, is.h).variance, h.moments.se_variance());
  }
  o.pass = o.pass && var[0] > var[1] && dev[0] <= kSe && dev[1] <= kSe;
  o.detail = fmt("var(0.96) = %.5f, var(0.08) = %.5f", var[0], var[1]) + fmt(", deviations %.2f / %.2f SE", dev[0], dev[1]);
  return o;
}

Outcome ac5_tpm() {
  Outcome o;
  const Ising is(0.45);
  const SpectralDecomposition spec = spectral_decomposition(is.h);
  double worst = 0.0;
  std::uint64_t stream = 0;
  for (double eps : {0.2, 0.5, 1.0}) {
    for (double alpha : {0.1, 0.5, 0.9}) {
      const DensityMatrix rho = is.state(alpha);
      const TpmVarianceReport r = tpm_variance_closed_form(rho, spec, eps, eps);
      const WorkStatistics mc = mc_tpm_statistics(rho, spec, eps, eps, 10000, {4, 1005, stream++});
      worst = std::max(worst, se_units(mc.variance, r.varTPM, mc.se_variance));
    }
  }
  RandomStream rng(1005, 99);
  double slack = 1.0;
  for (int d : {2, 4}) {
    for (int rep = 0; rep < 100; ++rep) {
      const SpectralDecomposition sp = spectral_decomposition(random_battery(d, rng, 0.2 + 2.0 * rng.uniform()));
      const DensityMatrix rho = random_density_matrix(d * d, rng, 1 + rep % (d * d));
      const TpmVarianceReport r = tpm_variance_closed_form(rho, sp, rng.uniform(), rng.uniform());
      slack = std::min(slack, r.varD - r.varTPM);
    }
  }
  o.pass = worst <= kSe && slack >= -1e-12;
  o.detail = fmt("worst MC deviation %.2f SE; min(varD - varTPM) over 200 instances = %.3g", worst, slack);
  return o;
}

Outcome ac6_weights() {
  Outcome o;
  double worst = 0.0;
  bool in_range = true;
  const int d = 4;
  for (int i = 0; i <= 100; ++i) {
    const TpmWeights w = tpm_weights(i / 100.0, i / 100.0, d);
    worst = std::max(worst, std::abs(w.n0 + w.n1 + w.nNoisy - 1.0));
    for (double n : {w.n0, w.n1, w.nNoisy}) in_range &= n >= 0.0 && n <= 1.0;
  }
  const TpmWeights w0 = tpm_weights(0.0, 0.0, d), w1 = tpm_weights(1.0, 1.0, d);
  o.pass = worst <= 1e-12 && in_range && std::abs(w0.n0 - 1.0) <= 1e-12 && std::abs(w1.n1 - 1.0) <= 1e-12;
  o.detail = fmt("max |sum - 1| = %.2g, n0(0) = %.15g, n1(1) = %.15g", worst, w0.n0, w1.n1);
  return o;
}

Outcome ac7_coincidence() {
  Outcome o;
  RandomStream rng(1007, 0);
  double worst = 0.0;
  std::uint64_t stream = 0;
  for (int d : {2, 4}) {
    const BatteryHamiltonian h = d == 4 ? ising_battery(0.5, 1.0, 0.5, 0.45) : random_battery(d, rng, 1.0);
    const SpectralDecomposition spec = spectral_decomposition(h);
    for (int rep = 0; rep < 10; ++rep) {
      const DensityMatrix rho = random_density_matrix(d * d, rng, 1 + rep % 3);
      for (double eps : {0.3, 0.7, 1.0}) {
        const CoincidenceEstimate mc = mc_coincidence(rho, spec, eps, eps, 100000, {d, 1007, stream++});
        worst = std::max(worst, se_units(mc.mean, avg_coincidence_closed(rho, spec, eps, eps), mc.se));
      }
    }
  }
  const BatteryHamiltonian ising = ising_battery(0.5, 1.0, 0.5, 0.45);
  const SpectralDecomposition ispec = spectral_decomposition(ising);
  double slack = 1.0;
  for (int rep = 0; rep < 100; ++rep) {
    const CoincidenceReport r = obs4_bound(random_density_matrix(16, rng, 1 + rep % 16), ising, ispec, rng.uniform());
    slack = std::min(slack, r.obs4_rhs - r.obs4_lhs);
  }
  o.pass = worst <= kSe && slack >= -1e-12;
  o.detail = fmt("60 MC comparisons, worst %.2f SE; min Obs4 slack %.3g", worst, slack);
  return o;
}

Outcome ac8_properties() {
  Outcome o;
  RandomStream rng(1008, 0);
  double rt = 0.0, pur = 0.0, gram = 0.0, swap = 0.0, ineq = 0.0, zeta = 0.0, closing = 0.0;
  for (int d = 2; d <= 4; ++d) {
    const HermitianBasis basis = gell_mann_basis(d);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        gram = std::max(gram, std::abs((basis[i] * basis[j]).trace() - (i == j ? static_cast<double>(d) : 0.0)));
    const Mat s = swap_operator(d);
    const Mat one = Mat::Identity(d * d, d * d);
    swap = std::max({swap, (s - s.adjoint()).cwiseAbs().maxCoeff(), (s * s - one).cwiseAbs().maxCoeff(),
                     std::abs(s.trace() - static_cast<double>(d)),
                     (s - swap_operator_from_basis(basis)).cwiseAbs().maxCoeff()});
    for (int rep = 0; rep < 100; ++rep) {
      const DensityMatrix rho = random_density_matrix(d * d, rng, 1 + rep % (d * d));
      const BlochForm f = bloch_decompose(rho, basis);
      rt = std::max(rt, (bloch_reconstruct(f, basis) - rho.matrix()).cwiseAbs().maxCoeff());
      const double direct = (rho.matrix() * rho.matrix()).trace().real();
      pur = std::max(pur, std::abs(purity_from_bloch(f) - direct));
      const Mat a = random_hermitian(d, rng), b = random_hermitian(d, rng);
      swap = std::max(swap, std::abs((s * kron(a, b)).trace() - (a * b).trace()));

      const SpectralDecomposition spec = spectral_decomposition(random_battery(d, rng, 1.0));
      const TpmSpectralStats st = tpm_spectral_stats(rho, spec);
      const SectorLengths &sec = st.sectors;
      ineq = std::max({ineq, d * st.pA2 - 1.0 - sec.rA2, d * st.pB2 - 1.0 - sec.rB2, st.qAB - sec.t2});
      zeta = std::max({zeta, st.zA - sec.t2, st.zB - sec.t2});
      closing = std::max(closing, std::abs(st.zAB - st.qAB));
    }
  }
  o.pass = rt <= 1e-12 && pur <= 1e-10 && gram <= 1e-12 && swap <= 1e-10 && ineq <= 1e-10 && zeta <= 1e-10 &&
           closing <= 1e-10;
  o.detail = fmt("round trip %.1e, purity %.1e, gram %.1e; ", rt, pur, gram) +
             fmt("swap %.1e, proof ineq %.1e, zeta %.1e; ", swap, ineq, zeta) + fmt("closing %.1e", closing);
  return o;
}

Outcome ac9_soundness() {
  Outcome o;
  RandomStream rng(1009, 0);
  const BatteryHamiltonian h = ising_battery(0.5, 1.0, 0.5, 0.45);
  int violations = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const DensityMatrix rho = rep % 2 ? random_product_state(4, rng) : random_separable_state(4, rng, 2 + rep % 6);
    const WitnessReport r = detect_schmidt_number(rho, h);
    if (exceeds(r.variance_used, r.thresholds[0].bound)) ++violations;
  }
  o.pass = violations == 0;
  o.detail = fmt("%.0f violations of the k=1 bound in 200 separable states", violations);
  return o;
}

Outcome ac10_isotropic() {
  Outcome o;
  const int d = 4;
  const BatteryHamiltonian h = ising_battery(0.5, 1.0, 0.5, 0.45);
  const CVec phi = oracle::bell_phi_plus(d);
  const Mat proj = phi * phi.adjoint();
  const Mat mixed = Mat::Identity(16, 16) / 16.0;
  int mismatches = 0;
  std::vector<double> last_below(d, -1.0), first_above(d, 2.0);
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const double alpha = static_cast<double>(i) / (n - 1);
    const DensityMatrix rho(alpha * proj + (1.0 - alpha) * mixed);
    const WitnessReport r = detect_schmidt_number(rho, h);
    // brute force: rA2 = rB2 = 0, t2 = 15 alpha^2, s_k = 4k - 1
    const double t2 = 15.0 * alpha * alpha;
    int want = 1;
    for (int k = 1; k <= d; ++k)
      if (t2 > (4.0 * k - 1.0) * (1.0 + 1e-9)) want = k + 1;
    if (r.detected_sn_lower_bound != want) ++mismatches;
    for (int k = 1; k < d; ++k) {
      if (r.detected_sn_lower_bound >= k + 1) first_above[k] = std::min(first_above[k], alpha);
      else last_below[k] = std::max(last_below[k], alpha);
    }
  }
  const double step = 1.0 / (n - 1);
  bool bracketed = true;
  for (int k = 1; k < d; ++k) {
    const double thr = std::sqrt((4.0 * k - 1.0) / 15.0);
    bracketed &= last_below[k] <= thr && first_above[k] > thr && first_above[k] - last_below[k] <= step * (1 + 1e-9);
    o.detail += fmt("k=%.0f: threshold %.6f in (%.6f, ", k, thr, last_below[k]) + fmt("%.6f]; ", first_above[k]);
  }
  o.pass = mismatches == 0 && bracketed;
  o.detail += fmt("%.0f mismatches on 1000 points", mismatches);
  return o;
}

} // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "two-copy twirl vs Monte Carlo", 180.0, ac1_twirl},
      {"AC2", "work variance closed form vs Monte Carlo", 300.0, ac2_variance},
      {"AC3", "Schmidt-number detection endpoints", 1.0, ac3_endpoints},
      {"AC4", "work histograms at 1e6 unitaries", 900.0, ac4_histogram},
      {"AC5", "TPM variance closed form vs Monte Carlo", 600.0, ac5_tpm},
      {"AC6", "TPM weight functions", 1.0, ac6_weights},
      {"AC7", "coincidence closed form and bound", 600.0, ac7_coincidence},
      {"AC8", "property suites", 60.0, ac8_properties},
      {"AC9", "soundness on separable states", 60.0, ac9_soundness},
      {"AC10", "isotropic thresholds", 60.0, ac10_isotropic},
  };
  int failed = 0;
  for (const Criterion &c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.time_limit_s) {
      o.pass = false;
      o.detail += fmt("; runtime %.1fs over the %.0fs limit", secs, c.time_limit_s);
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %s %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
