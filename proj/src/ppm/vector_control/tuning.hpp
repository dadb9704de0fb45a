// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_VECTOR_CONTROL_TUNING_HPP
#define PPM_VECTOR_CONTROL_TUNING_HPP

#include "ppm/vector_control/pi.hpp"

namespace ppm::vector_control {

/// Pole placement of a PI around the RL current plant
///   di/dt = (omega_fb/l) (-r i + u)
/// so the closed loop matches s^2 + 2 zeta w_n s + w_n^2, w_n = 1/(zeta tau).
PiGains tune_inner_loop(double r, double l, double zeta, double tau,
                        double omega_fb);

/// PI around an integrating plant dy/dt = g u (g may be negative; gains are
/// returned for |g| and the caller applies the sign).
PiGains tune_outer_integrating(double gain_abs, double zeta, double tau);

/// PI around a static gain with the inner-loop lag, y = g/(1 + tau_lag s) u.
PiGains tune_outer_static(double gain_abs, double tau_lag, double zeta,
                          double tau);

} // namespace ppm::vector_control

#endif
