// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_SERVICES_INERTIA_HPP
#define PPM_SERVICES_INERTIA_HPP

#include <vector>

namespace ppm::services {

/// Hidden-inertia loop: dP_eref = K * RoCoF, K = -2H by default.
struct InertiaConfig {
  double k = -10.0;  // loop gain
  double t_f = 0.1;  // washout time constant [s]
  double dp_min = -0.10, dp_max = 0.10;

  static InertiaConfig from_inertia(double h, double t_f = 0.1,
                                    double dp_limit = 0.10);
  void validate() const;
};

double inertia_power(double rocof, const InertiaConfig &cfg);

/// Discrete washout s / (1 + T_f s) on uniformly sampled frequency,
/// discretized with a first-order hold so ramps pass through exactly.
class RocofEstimator {
public:
  RocofEstimator(double t_f, double sample_step);

  double update(double f_sample); // returns the RoCoF estimate [pu/s]
  void reset();

private:
  double t_f_;
  double h_;
  double alpha_;
  double state_ = 0.0;
  double prev_ = 0.0;
  bool primed_ = false;
};

/// Filtered derivative of a whole series; step must satisfy h <= t_f / 5
/// (throws InsufficientSamples otherwise, as does a series shorter than 2).
std::vector<double> measure_rocof(const std::vector<double> &f_samples,
                                  double t_f, double sample_step);

} // namespace ppm::services

#endif
