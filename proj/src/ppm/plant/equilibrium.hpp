// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_PLANT_EQUILIBRIUM_HPP
#define PPM_PLANT_EQUILIBRIUM_HPP

#include <functional>

#include "ppm/plant/dynamics.hpp"

namespace ppm::plant {

/// Output setpoints defining the operating point.
struct Setpoints {
  double p_ref_1 = 0.6527, p_ref_2 = 0.6527;
  double q_ref_1 = 0.0, q_ref_2 = 0.0;
  double v_dc_ref_1 = 2.5, v_dc_ref_2 = 2.5;
};

/// The operating manifold is underdetermined by the setpoints alone; rotor
/// speeds are pinned either explicitly or by consistency with a mechanical
/// power curve P_m(omega) (over-speed branch selected via the guess).
struct SpeedPinning {
  enum class Mode { FixedSpeed, AeroPower };
  Mode mode = Mode::FixedSpeed;
  double omega_ref_1 = 1.0, omega_ref_2 = 1.0;
  std::function<double(double)> p_m1, p_m2;   // AeroPower: P_m(omega)
  std::function<double(double)> dp_m1, dp_m2; // d P_m / d omega
  double omega_guess_1 = 1.0, omega_guess_2 = 1.0;
};

struct Equilibrium {
  PlantState x;
  ControlInput u;
  DisturbanceInput w;
  double p_m_rest = 0.0; // rest-of-system generation pinning omega_f = 1
  double residual = 0.0; // max-abs state derivative at the solution
  int iterations = 0;
};

/// Damped Newton on the derivative map plus the setpoint/pinning equations.
/// i_sd = 0 on both machines and omega_f = 1 (via p_m_rest) close the system.
/// Throws NoConvergence or InfeasibleSetpoint.
Equilibrium find_equilibrium(const Setpoints &sp, const PlantParams &params,
                             const SpeedPinning &pin = {});

} // namespace ppm::plant

#endif
