// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/services/aero.hpp"

#include <algorithm>
#include <cmath>

namespace ppm::services {

double TurbineAeroModel::cp(double lambda, double beta) const {
  if (lambda <= 0.0)
    return 0.0;
  const double den = lambda + 0.08 * beta;
  if (den <= 0.0)
    return 0.0;
  const double inv_li = 1.0 / den - 0.035 / (beta * beta * beta + 1.0);
  const double value =
      c1 * (c2 * inv_li - c3 * beta - c4) * std::exp(-c5 * inv_li) +
      c6 * lambda;
  return std::max(value, 0.0);
}

double TurbineAeroModel::tip_speed_ratio(double v_wind, double omega_pu) const {
  return rotor_radius * omega_b * omega_pu / v_wind;
}

double TurbineAeroModel::mech_power(double v_wind, double omega_pu,
                                    double beta) const {
  if (v_wind <= 0.0)
    return 0.0;
  const double lambda = tip_speed_ratio(v_wind, omega_pu);
  return 0.5 * rho * rotor_area * cp(lambda, beta) * v_wind * v_wind * v_wind /
         s_base;
}

double TurbineAeroModel::mech_power_domega(double v_wind, double omega_pu,
                                           double beta) const {
  const double h = 1e-6 * std::max(1.0, std::abs(omega_pu));
  return (mech_power(v_wind, omega_pu + h, beta) -
          mech_power(v_wind, omega_pu - h, beta)) /
         (2.0 * h);
}

} // namespace ppm::services
