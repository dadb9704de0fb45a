// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_SERVICES_AERO_HPP
#define PPM_SERVICES_AERO_HPP

namespace ppm::services {

/// Wind-turbine aerodynamics: the standard exponential power-coefficient
/// model cp(lambda, beta) with
///   1/lambda_i = 1/(lambda + 0.08 beta) - 0.035/(beta^3 + 1)
///   cp = c1 (c2/lambda_i - c3 beta - c4) exp(-c5/lambda_i) + c6 lambda
/// clipped below at zero. Mechanical power in pu on s_base.
struct TurbineAeroModel {
  double rho = 1.225;           // air density [kg/m^3]
  double rotor_radius = 82.0;   // [m]
  double rotor_area = 21124.069; // swept area [m^2]
  double c1 = 0.5176, c2 = 116.0, c3 = 0.4, c4 = 5.0, c5 = 21.0, c6 = 0.0068;
  double lambda_min = 0.3, lambda_max = 14.0;
  double beta_min = 0.0, beta_max = 25.0; // [deg]
  double omega_min = 0.15, omega_max = 1.25; // rotor-speed search band [pu]
  double s_base = 8.0e6;  // [VA]
  double omega_b = 1.0471975511965976; // mechanical base speed [rad/s]

  double cp(double lambda, double beta) const;
  double tip_speed_ratio(double v_wind, double omega_pu) const;
  double mech_power(double v_wind, double omega_pu, double beta) const; // pu
  /// d P_m / d omega at fixed wind speed and pitch (central difference).
  double mech_power_domega(double v_wind, double omega_pu, double beta) const;
};

} // namespace ppm::services

#endif
