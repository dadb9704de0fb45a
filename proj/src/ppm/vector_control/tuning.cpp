// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/vector_control/tuning.hpp"

#include "ppm/common/errors.hpp"

namespace ppm::vector_control {

PiGains tune_inner_loop(double r, double l, double zeta, double tau,
                        double omega_fb) {
  if (r <= 0.0 || l <= 0.0 || tau <= 0.0 || omega_fb <= 0.0)
    throw ConfigError("inner-loop tuning needs positive r, l, tau");
  if (!(zeta > 0.0 && zeta <= 2.0))
    throw ConfigError("inner-loop damping ratio must lie in (0, 2]");
  const double k = omega_fb / l;
  const double w_n = 1.0 / (zeta * tau);
  const double k_p = 2.0 * zeta * w_n / k - r;
  if (k_p <= 0.0)
    throw ConfigError("requested inner loop is slower than the open RL pole");
  return {k_p, k * k_p / (w_n * w_n)};
}

PiGains tune_outer_integrating(double gain_abs, double zeta, double tau) {
  if (gain_abs <= 0.0 || zeta <= 0.0 || tau <= 0.0)
    throw ConfigError("outer-loop tuning needs positive gain, zeta, tau");
  const double w_n = 1.0 / (zeta * tau);
  const double k_p = 2.0 * zeta * w_n / gain_abs;
  return {k_p, 2.0 * zeta / w_n};
}

PiGains tune_outer_static(double gain_abs, double tau_lag, double zeta,
                          double tau) {
  if (gain_abs <= 0.0 || tau <= 0.0)
    throw ConfigError("outer-loop tuning needs positive gain and tau");
  if (tau < 10.0 * tau_lag)
    throw ConfigError("outer loop must be at least 10x slower than the lag");
  (void)zeta; // the inner lag fixes the (high) effective damping here
  // loop stiffness 4, integral time set so the prefiltered closed loop has
  // time constant tau: tau_cl = T_i (1 + g K_p)/(g K_p)
  const double k_p = 4.0 / gain_abs;
  return {k_p, 0.8 * tau};
}

} // namespace ppm::vector_control
