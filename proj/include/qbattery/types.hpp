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

#ifndef QBATTERY_TYPES_HPP
#define QBATTERY_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qbattery {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Largest local dimension the dense routines are meant for.
inline constexpr int kMaxLocalDim = 16;

/// Eigenvalues above -kPsdTolerance are accepted as non-negative.
inline constexpr double kPsdTolerance = 1e-9;

enum class Side { A, B };

inline const char *to_string(Side s) { return s == Side::A ? "A" : "B"; }

/// Execution policy for Monte-Carlo kernels. Both policies produce
/// bit-identical results; `serial` is the reference path.
enum class Exec { serial, parallel };

enum class ErrorKind {
  invalid_dimension,
  dimension_mismatch,
  invalid_state,
  invalid_temperature,
  incompatible_marginals,
  out_of_range,
  divergent_labels,
  non_pure_state,
  asymmetric_fields,
  undefined_bound,
  invalid_sample_count,
  config,
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace qbattery

#endif // QBATTERY_TYPES_HPP
