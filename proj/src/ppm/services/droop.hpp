// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_SERVICES_DROOP_HPP
#define PPM_SERVICES_DROOP_HPP

#include "ppm/services/deload.hpp"

namespace ppm::services {

struct DroopConfig {
  double r = 0.05;        // droop constant [pu frequency / pu power]
  double deadband = 5e-4; // [pu]
  double dp_min = -0.10, dp_max = 0.10; // output limits [pu]

  double k_droop() const { return -1.0 / r; }
  void validate() const;
};

/// Deadband, then -df/r, then the output limits.
double droop_power(double df, const DroopConfig &cfg);

/// Collinear interpolation between the deloaded and optimal points:
/// omega_ref = omega_del - (omega_del - omega_opt) * (-df/r) / (p_opt - p_del),
/// clamped to the segment. Throws DegenerateCurve when p_opt == p_del.
double speed_reference(double df, const DeloadPoint &pt, double r);

/// Same collinearity on the pitch branch, beta_opt = 0 by convention.
double pitch_reference(double df, const DeloadPoint &pt, double r,
                       double beta_opt = 0.0);

} // namespace ppm::services

#endif
