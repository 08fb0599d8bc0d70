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

#include "oracles.hpp"
#include "qbattery/bloch.hpp"
#include "qbattery/random_states.hpp"

using namespace qbattery;

namespace {

double max_abs(const Mat &m) { return m.cwiseAbs().maxCoeff(); }

DensityMatrix bell(int d) { return DensityMatrix::from_pure(oracle::bell_phi_plus(d)); }

} // namespace

TEST_CASE("gell-mann basis at d=2 is X, Y, Z") {
  const HermitianBasis b = gell_mann_basis(2);
  REQUIRE(b.size() == 3);
  Mat x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  CHECK(max_abs(b[0] - x) < 1e-15);
  CHECK(max_abs(b[1] - y) < 1e-15);
  CHECK(max_abs(b[2] - z) < 1e-15);
  for (std::size_t i = 0; i < 3; ++i) CHECK((b[i] * b[i]).trace().real() == doctest::Approx(2.0));
}

TEST_CASE("basis gram matrix equals d times identity") {
  for (int d = 2; d <= 8; ++d) {
    CAPTURE(d);
    const HermitianBasis b = gell_mann_basis(d);
    REQUIRE(b.size() == static_cast<std::size_t>(d * d - 1));
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(is_hermitian(b[i], 0.0));
      CHECK(std::abs(b[i].trace()) < 1e-12);
      for (std::size_t j = 0; j < b.size(); ++j) {
        const cplx g = (b[i] * b[j]).trace();
        CHECK(std::abs(g - (i == j ? static_cast<double>(d) : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("dimension checks") {
  CHECK_THROWS_AS(gell_mann_basis(1), Error);
  try {
    gell_mann_basis(0);
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::invalid_dimension);
  }
  const DensityMatrix rho = DensityMatrix::maximally_mixed(6);
  try {
    bloch_decompose(rho, 2);
    FAIL("expected dimension mismatch");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::dimension_mismatch);
  }
  CHECK_THROWS_AS(partial_trace(rho, Side::A, 2), Error);
  CHECK_THROWS_AS(partial_transpose_min_eig(rho, 2), Error);
}

TEST_CASE("density matrix validation") {
  Mat bad = Mat::Identity(4, 4);
  CHECK_THROWS_AS(DensityMatrix{bad}, Error);
  Mat neg = Mat::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, Error);
  Mat nh = Mat::Identity(2, 2) / 2.0;
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{nh}, Error);
  // Rounding-level negativity is accepted.
  Mat tiny = Mat::Zero(2, 2);
  tiny(0, 0) = 1.0 + 1e-11;
  tiny(1, 1) = -1e-11;
  CHECK_NOTHROW(DensityMatrix{tiny});
}

TEST_CASE("maximally mixed state has empty bloch form") {
  for (int d = 2; d <= 4; ++d) {
    const DensityMatrix rho = DensityMatrix::maximally_mixed(d * d);
    const BlochForm f = bloch_decompose(rho, d);
    CHECK(f.rA.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(f.rB.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(f.t.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(purity(rho) == doctest::Approx(1.0 / (d * d)));
  }
}

TEST_CASE("two-qubit bell state") {
  const DensityMatrix rho = bell(2);
  const BlochForm f = bloch_decompose(rho, 2);
  RMat expect = RMat::Zero(3, 3);
  expect.diagonal() << 1.0, -1.0, 1.0;
  CHECK((f.t - expect).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(f.rA.norm() < 1e-15);
  CHECK(f.rB.norm() < 1e-15);
  CHECK(f.t2 == doctest::Approx(3.0));
  CHECK(purity(rho) == doctest::Approx(1.0));
  CHECK(purity_from_bloch(f) == doctest::Approx(1.0));
  CHECK(max_abs(partial_trace(rho, Side::A, 2).matrix() - Mat::Identity(2, 2) / 2.0) < 1e-15);
  CHECK(max_abs(partial_trace(rho, Side::B, 2).matrix() - Mat::Identity(2, 2) / 2.0) < 1e-15);
  CHECK(partial_transpose_min_eig(rho, 2) == doctest::Approx(-0.5));
}

TEST_CASE("bloch coordinates match full-space traces") {
  RandomStream rng(11, 0);
  for (int d = 2; d <= 4; ++d) {
    const HermitianBasis basis = gell_mann_basis(d);
    for (int rep = 0; rep < 10; ++rep) {
      const DensityMatrix rho = random_density_matrix(d * d, rng);
      const BlochForm f = bloch_decompose(rho, d);
      const oracle::Bloch o = oracle::bloch(rho.matrix(), basis);
      CHECK((f.rA - o.rA).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((f.rB - o.rB).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((f.t - o.t).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("product states factorize") {
  RandomStream rng(12, 0);
  for (int d = 2; d <= 4; ++d) {
    const DensityMatrix a = random_density_matrix(d, rng);
    const DensityMatrix b = random_density_matrix(d, rng);
    const DensityMatrix rho(kron(a.matrix(), b.matrix()));
    const BlochForm f = bloch_decompose(rho, d);
    CHECK((f.t - f.rA * f.rB.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_abs(partial_trace(rho, Side::A, d).matrix() - a.matrix()) < 1e-13);
    CHECK(max_abs(partial_trace(rho, Side::B, d).matrix() - b.matrix()) < 1e-13);
    CHECK(partial_transpose_min_eig(rho, d) >= -1e-14);
  }
}

TEST_CASE("round trip and purity over 100 random states per d") {
  RandomStream rng(13, 0);
  for (int d = 2; d <= 4; ++d) {
    const HermitianBasis basis = gell_mann_basis(d);
    double worst_rt = 0.0, worst_pur = 0.0, worst_sec = 0.0, worst_pt = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      const int rank = 1 + rep % (d * d);
      const DensityMatrix rho = random_density_matrix(d * d, rng, rank);
      const BlochForm f = bloch_decompose(rho, basis);
      worst_rt = std::max(worst_rt, max_abs(bloch_reconstruct(f, basis) - rho.matrix()));
      const double direct = (rho.matrix() * rho.matrix()).trace().real();
      worst_pur = std::max({worst_pur, std::abs(purity_from_bloch(f) - direct), std::abs(purity(rho) - direct)});
      const SectorLengths a = sector_lengths(f);
      const SectorLengths b = sector_lengths_from_purities(rho, d);
      worst_sec = std::max({worst_sec, std::abs(a.rA2 - b.rA2), std::abs(a.rB2 - b.rB2), std::abs(a.t2 - b.t2)});
      const Mat ptr_a = oracle::partial_trace(rho.matrix(), Side::A, d);
      worst_pt = std::max(worst_pt, max_abs(partial_trace(rho, Side::A, d).matrix() - ptr_a));
    }
    CAPTURE(d);
    CHECK(worst_rt < 1e-12);
    CHECK(worst_pur < 1e-10);
    CHECK(worst_sec < 1e-10);
    CHECK(worst_pt < 1e-13);
  }
}

TEST_CASE("swap operator identities") {
  RandomStream rng(14, 0);
  for (int d = 2; d <= 5; ++d) {
    const Mat s = swap_operator(d);
    const Mat one = Mat::Identity(d * d, d * d);
    CHECK(max_abs(s - s.adjoint()) == 0.0);
    CHECK(max_abs(s * s - one) == 0.0);
    CHECK(std::abs(s.trace() - static_cast<double>(d)) < 1e-15);
    CHECK(max_abs(s - swap_operator_from_basis(gell_mann_basis(d))) < 1e-12);
    CHECK(max_abs(s - factor_swap(d, 2, 0, 1)) == 0.0);
    for (int rep = 0; rep < 5; ++rep) {
      const Mat a = random_hermitian(d, rng);
      const Mat b = random_hermitian(d, rng);
      CHECK(std::abs((s * kron(a, b)).trace() - (a * b).trace()) < 1e-11);
    }
  }
}

TEST_CASE("partial transpose is an involution") {
  RandomStream rng(15, 0);
  const Mat m = random_hermitian(9, rng);
  CHECK(max_abs(partial_transpose(partial_transpose(m, 3), 3) - m) == 0.0);
}

TEST_CASE("ordered eigenbasis") {
  Mat diag = Mat::Zero(4, 4);
  diag.diagonal() << -0.5, 1.0, -0.5, 2.0;
  const OrderedEigenbasis comp = ordered_eigenbasis(diag, EigenOrder::computational_if_diagonal);
  CHECK(max_abs(comp.vectors - Mat::Identity(4, 4)) == 0.0);
  const OrderedEigenbasis desc = ordered_eigenbasis(diag, EigenOrder::descending);
  CHECK(desc.values(0) == 2.0);
  CHECK(desc.values(3) == -0.5);
  // ties keep index order
  CHECK(std::abs(desc.vectors(0, 2)) == 1.0);
  CHECK(std::abs(desc.vectors(2, 3)) == 1.0);

  RandomStream rng(16, 0);
  const Mat h = random_hermitian(5, rng);
  const OrderedEigenbasis e = ordered_eigenbasis(h, EigenOrder::descending);
  CHECK(oracle::unitarity_error(e.vectors) < 1e-12);
  CHECK(max_abs(e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint() - h) < 1e-12);
  for (int k = 0; k + 1 < 5; ++k) CHECK(e.values(k) >= e.values(k + 1));
}
