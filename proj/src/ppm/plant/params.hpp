// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_PLANT_PARAMS_HPP
#define PPM_PLANT_PARAMS_HPP

#include <array>
#include <string>

namespace ppm::plant {

/// Base quantities of the per-unit system. All powers are expressed on
/// s_base, electrical angles on omega_fb, mechanical speeds on omega_b.
struct BaseQuantities {
  double omega_fb = 314.15926535897931; // electrical base speed [rad/s]
  double omega_b = 1.0471975511965976;  // mechanical base speed [rad/s]
  double s_base = 8.0e6;                // base power [VA]

  void validate() const;
};

/// Per-machine parameters of one PMSG with its LCL filter, DC link,
/// drive train and pitch servo. Everything in pu except where noted.
struct PmsgParams {
  // LCL filter, converter side / grid side
  double r_1f = 0.005;
  double l_1f = 0.20;
  double r_2f = 0.003;
  double l_2f = 0.15;
  double c_f = 0.117;
  // stator
  double r_s = 0.006;
  double l_s = 0.40;
  // DC link capacitance
  double c_dc = 1.2;
  // drive train
  double h_t = 4.5;    // inertia constant [s]
  double d_l = 0.008;  // damping, d_l = omega_b^2 * f_fric / s_base
  int pole_pairs = 300;
  double psi_f = 1.0;  // permanent-magnet flux
  double n_tr = 1.0;   // transformer ratio
  // pitch servo
  double tau_c = 0.2;       // [s]
  double beta_min = 0.0;    // [deg]
  double beta_max = 20.0;   // [deg]
  double dbeta_min = -10.0; // [deg/s]
  double dbeta_max = 10.0;  // [deg/s]

  void validate() const;
};

/// Grid dynamic equivalent: single-inertia swing model of the rest of
/// the system, on the same power base as the machines.
struct GridEquivalentParams {
  double h = 37500.0;       // equivalent inertia [s] on s_base
  double d_u = 9600.0;      // damping factor, d_u = omega_b^2 * D / s_base
  double p_m_rest = 6873.7; // constant generation of the rest of the system [pu]
  double p_l0 = 6875.0;     // nominal grid load [pu]
  bool secondary_enabled = false;
  double k_sec = 0.05;      // restoring integrator gain [pu/s], used if enabled

  void validate() const;
};

} // namespace ppm::plant

#endif
