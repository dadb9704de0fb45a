// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/services/droop.hpp"

#include <algorithm>
#include <cmath>

#include "ppm/common/errors.hpp"

namespace ppm::services {

void DroopConfig::validate() const {
  if (r <= 0.0)
    throw ConfigError("droop constant must be > 0");
  if (deadband < 0.0 || dp_min > dp_max)
    throw ConfigError("droop deadband/limits are inconsistent");
}

double droop_power(double df, const DroopConfig &cfg) {
  if (std::abs(df) <= cfg.deadband)
    return 0.0;
  return std::clamp(-df / cfg.r, cfg.dp_min, cfg.dp_max);
}

double speed_reference(double df, const DeloadPoint &pt, double r) {
  const double reserve = pt.p_m_opt - pt.p_m_del;
  if (reserve == 0.0)
    throw DegenerateCurve("speed reference needs p_m_opt != p_m_del");
  const double omega_ref =
      pt.omega_del -
      (pt.omega_del - pt.omega_opt) * (-(1.0 / r) * df / reserve);
  return std::clamp(omega_ref, std::min(pt.omega_opt, pt.omega_del),
                    std::max(pt.omega_opt, pt.omega_del));
}

double pitch_reference(double df, const DeloadPoint &pt, double r,
                       double beta_opt) {
  const double reserve = pt.p_m_opt - pt.p_m_del;
  if (reserve == 0.0)
    throw DegenerateCurve("pitch reference needs p_m_opt != p_m_del");
  const double beta_ref =
      pt.beta_del - (pt.beta_del - beta_opt) * (-(1.0 / r) * df / reserve);
  return std::clamp(beta_ref, std::min(beta_opt, pt.beta_del),
                    std::max(beta_opt, pt.beta_del));
}

} // namespace ppm::services
