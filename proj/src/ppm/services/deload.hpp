// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_SERVICES_DELOAD_HPP
#define PPM_SERVICES_DELOAD_HPP

#include <vector>

#include "ppm/services/aero.hpp"

namespace ppm::services {

/// Optimal and deloaded operating points at one wind speed. The over-speed
/// branch (omega_del > omega_opt) stores kinetic energy for inertia support;
/// the pitch branch holds omega at the optimum and feathers to beta_del.
struct DeloadPoint {
  double v_w = 0.0;
  double omega_opt = 0.0, p_m_opt = 0.0;
  double omega_del = 0.0, p_m_del = 0.0;
  double beta_del = 0.0;
  bool speed_branch_ok = false;
  bool pitch_branch_ok = false;
};

struct DeloadCurve {
  std::vector<DeloadPoint> points;
  double deload_fraction = 0.10;
};

/// Single-speed solve. Throws NoDeloadSolution when the turbine produces no
/// power at this wind speed or neither deloading branch has a solution
/// inside the operating band.
DeloadPoint deload_point(const TurbineAeroModel &aero, double v_w,
                         double deload_fraction);

/// Sweeps [v_lo, v_hi]; rows whose branches fail are kept and flagged.
DeloadCurve build_deload_curve(const TurbineAeroModel &aero, double v_lo,
                               double v_hi, int samples,
                               double deload_fraction);

} // namespace ppm::services

#endif
