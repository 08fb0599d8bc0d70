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

#include "qbattery/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qbattery {

void Moments::add(double x) {
  const double n1 = static_cast<double>(n_);
  ++n_;
  const double n = static_cast<double>(n_);
  const double delta = x - mean_;
  const double delta_n = delta / n;
  const double delta_n2 = delta_n * delta_n;
  const double term1 = delta * delta_n * n1;
  mean_ += delta_n;
  m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ - 4.0 * delta_n * m3_;
  m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
  m2_ += term1;
}

void Moments::merge(const Moments &o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const double delta = o.mean_ - mean_;
  const double d2 = delta * delta;
  const double d3 = d2 * delta;
  const double d4 = d2 * d2;

  const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
  const double m3 = m3_ + o.m3_ + d3 * na * nb * (na - nb) / (n * n) +
                    3.0 * delta * (na * o.m2_ - nb * m2_) / n;
  const double m4 = m4_ + o.m4_ + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                    6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) +
                    4.0 * delta * (na * o.m3_ - nb * m3_) / n;
  mean_ += delta * nb / n;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  n_ += o.n_;
}

double Moments::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double Moments::central_moment(int k) const {
  if (n_ == 0) return 0.0;
  const double n = static_cast<double>(n_);
  switch (k) {
  case 2: return m2_ / n;
  case 3: return m3_ / n;
  case 4: return m4_ / n;
  default: return std::numeric_limits<double>::quiet_NaN();
  }
}

double Moments::skewness() const {
  const double m2 = central_moment(2);
  return m2 > 0.0 ? central_moment(3) / std::pow(m2, 1.5) : 0.0;
}

double Moments::se_mean() const {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double Moments::se_variance() const {
  if (n_ < 3) return 0.0;
  const double n = static_cast<double>(n_);
  const double b = n / ((n - 1.0) * (n - 2.0));
  const double m2 = central_moment(2);
  const double spread = std::max(0.0, central_moment(4) - m2 * m2);
  return std::sqrt((n - 1.0) * b * b * spread);
}

double Moments::se_skewness() const {
  if (n_ < 3) return 0.0;
  const double n = static_cast<double>(n_);
  return std::sqrt(6.0 * n * (n - 1.0) / ((n - 2.0) * (n + 1.0) * (n + 3.0)));
}

MatrixMoments::MatrixMoments(Eigen::Index rows, Eigen::Index cols)
    : mean_(Mat::Zero(rows, cols)), m2re_(RMat::Zero(rows, cols)), m2im_(RMat::Zero(rows, cols)) {}

void MatrixMoments::add(const Mat &x) {
  if (mean_.size() == 0) *this = MatrixMoments(x.rows(), x.cols());
  ++n_;
  const double n = static_cast<double>(n_);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const cplx delta = x(i, j) - mean_(i, j);
      mean_(i, j) += delta / n;
      const cplx after = x(i, j) - mean_(i, j);
      m2re_(i, j) += delta.real() * after.real();
      m2im_(i, j) += delta.imag() * after.imag();
    }
  }
}

void MatrixMoments::merge(const MatrixMoments &o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const Mat delta = o.mean_ - mean_;
  m2re_ += o.m2re_ + (delta.real().array().square() * (na * nb / n)).matrix();
  m2im_ += o.m2im_ + (delta.imag().array().square() * (na * nb / n)).matrix();
  mean_ += delta * (nb / n);
  n_ += o.n_;
}

RMat MatrixMoments::se_real() const {
  if (n_ < 2) return RMat::Zero(mean_.rows(), mean_.cols());
  const double n = static_cast<double>(n_);
  return (m2re_.array() / ((n - 1.0) * n)).sqrt().matrix();
}

RMat MatrixMoments::se_imag() const {
  if (n_ < 2) return RMat::Zero(mean_.rows(), mean_.cols());
  const double n = static_cast<double>(n_);
  return (m2im_.array() / ((n - 1.0) * n)).sqrt().matrix();
}

double max_se_ratio(const MatrixMoments &mc, const Mat &expected, double k_se, double floor) {
  const RMat sre = mc.se_real();
  const RMat sim = mc.se_imag();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < expected.cols(); ++j) {
    for (Eigen::Index i = 0; i < expected.rows(); ++i) {
      const cplx diff = mc.mean()(i, j) - expected(i, j);
      worst = std::max(worst, std::abs(diff.real()) / (k_se * sre(i, j) + floor));
      worst = std::max(worst, std::abs(diff.imag()) / (k_se * sim(i, j) + floor));
    }
  }
  return worst;
}

} // namespace qbattery
