// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/control/weights.hpp"

#include <cmath>
#include <complex>

#include "ppm/common/errors.hpp"

namespace ppm::control {

namespace {
constexpr double kZeroOverCorner = 1.0 / 3.0; // zero below the nominal corner
constexpr double kPoleOverCorner = 40.0;      // levelling pole above the band
} // namespace

WeightFilter make_rolloff_filter(double corner_hz, int order, double gain) {
  if (corner_hz <= 0.0)
    throw ConfigError("rolloff corner must be > 0 Hz");
  if (order < 1)
    throw ConfigError("rolloff order must be >= 1");
  if (gain <= 0.0)
    throw ConfigError("rolloff gain must be > 0");

  const double wc = 2.0 * M_PI * corner_hz;
  const double z = kZeroOverCorner * wc;
  const double p = kPoleOverCorner * wc;
  // per-section gain normalized so the full cascade has |W(j wc)| = gain
  const double shape = std::sqrt((wc * wc + z * z) / (wc * wc + p * p));
  const double k = std::pow(gain, 1.0 / order) / shape;

  // series realization of one channel: x_i' = -p x_i + (input of section i)
  Eigen::MatrixXd ac = Eigen::MatrixXd::Zero(order, order);
  Eigen::VectorXd bc = Eigen::VectorXd::Zero(order);
  Eigen::RowVectorXd cc = Eigen::RowVectorXd::Zero(order);
  double dc = 1.0;
  for (int i = 0; i < order; ++i) {
    // section i: a=-p, b=1, c=k(z-p), d=k, fed by the cascade so far
    ac(i, i) = -p;
    if (i > 0)
      ac.row(i).head(i) = cc.head(i);
    bc(i) = dc;
    cc.head(i) *= k;
    cc(i) = k * (z - p);
    dc *= k;
  }

  WeightFilter w;
  w.order = order;
  w.corner_hz = corner_hz;
  w.gain = gain;
  const int n = order;
  w.a_w3 = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  w.b_w3 = Eigen::MatrixXd::Zero(2 * n, 2);
  w.c_w3 = Eigen::MatrixXd::Zero(2, 2 * n);
  w.d_w3 = Eigen::MatrixXd::Zero(2, 2);
  for (int ch = 0; ch < 2; ++ch) {
    w.a_w3.block(ch * n, ch * n, n, n) = ac;
    w.b_w3.block(ch * n, ch, n, 1) = bc;
    w.c_w3.block(ch, ch * n, 1, n) = cc;
    w.d_w3(ch, ch) = dc;
  }
  w.c_q = Eigen::MatrixXd::Zero(2, 6);
  w.c_q(0, 0) = 1.0;
  w.c_q(1, 3) = 1.0;
  return w;
}

double WeightFilter::magnitude(double omega) const {
  const double wc = 2.0 * M_PI * corner_hz;
  const double z = kZeroOverCorner * wc;
  const double p = kPoleOverCorner * wc;
  const double shape = std::sqrt((wc * wc + z * z) / (wc * wc + p * p));
  const double k = std::pow(gain, 1.0 / order) / shape;
  const std::complex<double> s(0.0, omega);
  const std::complex<double> section = k * (s + z) / (s + p);
  return std::pow(std::abs(section), order);
}

} // namespace ppm::control
