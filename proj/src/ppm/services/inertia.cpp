// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/services/inertia.hpp"

#include <algorithm>
#include <cmath>

#include "ppm/common/errors.hpp"

namespace ppm::services {

InertiaConfig InertiaConfig::from_inertia(double h, double t_f,
                                          double dp_limit) {
  InertiaConfig cfg;
  cfg.k = -2.0 * h;
  cfg.t_f = t_f;
  cfg.dp_min = -dp_limit;
  cfg.dp_max = dp_limit;
  return cfg;
}

void InertiaConfig::validate() const {
  if (t_f <= 0.0)
    throw ConfigError("washout time constant must be > 0");
  if (dp_min > dp_max)
    throw ConfigError("inertia output limits are inverted");
}

double inertia_power(double rocof, const InertiaConfig &cfg) {
  return std::clamp(cfg.k * rocof, cfg.dp_min, cfg.dp_max);
}

RocofEstimator::RocofEstimator(double t_f, double sample_step)
    : t_f_(t_f), h_(sample_step) {
  if (t_f <= 0.0 || sample_step <= 0.0)
    throw ConfigError("RoCoF estimator needs positive time constants");
  if (sample_step > t_f / 5.0)
    throw InsufficientSamples("sample step must be <= T_f / 5");
  alpha_ = std::exp(-h_ / t_f_);
}

void RocofEstimator::reset() { primed_ = false; }

double RocofEstimator::update(double f_sample) {
  if (!primed_) {
    state_ = f_sample;
    prev_ = f_sample;
    primed_ = true;
    return 0.0;
  }
  // first-order-hold step of x' = (u - x)/T_f over [t-h, t]
  const double du = f_sample - prev_;
  state_ = alpha_ * state_ + (1.0 - alpha_) * prev_ +
           du * (1.0 - t_f_ * (1.0 - alpha_) / h_);
  prev_ = f_sample;
  return (f_sample - state_) / t_f_;
}

std::vector<double> measure_rocof(const std::vector<double> &f_samples,
                                  double t_f, double sample_step) {
  if (f_samples.size() < 2)
    throw InsufficientSamples("need at least two frequency samples");
  RocofEstimator est(t_f, sample_step);
  std::vector<double> out;
  out.reserve(f_samples.size());
  for (double f : f_samples)
    out.push_back(est.update(f));
  return out;
}

} // namespace ppm::services
