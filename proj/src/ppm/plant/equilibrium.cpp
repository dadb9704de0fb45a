// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/plant/equilibrium.hpp"

#include <cmath>

#include "ppm/common/errors.hpp"
#include "ppm/plant/jacobians.hpp"

namespace ppm::plant {

namespace {

// Unknown layout: x(0..20), u(21..28), p_m1(29), p_m2(30), p_m_rest(31).
constexpr int kNz = 32;

struct Unpacked {
  PlantState x;
  ControlInput u;
  DisturbanceInput w;
  double p_m_rest;
};

Unpacked unpack(const Eigen::VectorXd &z, const PlantParams &params) {
  Unpacked r;
  r.x = PlantState::from_vector(z.head<21>());
  r.u = ControlInput::from_vector(z.segment<8>(21));
  r.w = {z(29), z(30), params.gde.p_l0};
  r.p_m_rest = z(31);
  return r;
}

Eigen::VectorXd residual_map(const Eigen::VectorXd &z, const Setpoints &sp,
                             const PlantParams &params,
                             const SpeedPinning &pin) {
  const Unpacked v = unpack(z, params);
  PlantParams p = params;
  p.gde.p_m_rest = v.p_m_rest;
  p.gde.secondary_enabled = false;

  const PlantState dx = pmsg_derivatives(v.x, v.u, v.w, p);
  const OutputVector y = outputs(v.x, p);

  Eigen::VectorXd f(kNz);
  f.head<21>() = dx.to_vector();
  f(21) = y.q_1 - sp.q_ref_1;
  f(22) = y.p_1 - sp.p_ref_1;
  f(23) = y.v_dc1 - sp.v_dc_ref_1;
  f(24) = y.q_2 - sp.q_ref_2;
  f(25) = y.p_2 - sp.p_ref_2;
  f(26) = y.v_dc2 - sp.v_dc_ref_2;
  f(27) = v.x.m1.i_sd;
  f(28) = v.x.m2.i_sd;
  f(29) = v.x.omega_f - 1.0;
  if (pin.mode == SpeedPinning::Mode::FixedSpeed) {
    f(30) = v.x.m1.omega_r - pin.omega_ref_1;
    f(31) = v.x.m2.omega_r - pin.omega_ref_2;
  } else {
    f(30) = v.w.p_m1 - pin.p_m1(v.x.m1.omega_r);
    f(31) = v.w.p_m2 - pin.p_m2(v.x.m2.omega_r);
  }
  return f;
}

Eigen::MatrixXd residual_jacobian(const Eigen::VectorXd &z,
                                  const PlantParams &params,
                                  const SpeedPinning &pin) {
  const Unpacked v = unpack(z, params);
  PlantParams p = params;
  p.gde.p_m_rest = v.p_m_rest;
  p.gde.secondary_enabled = false;

  const Jacobians j = compute_jacobians(v.x, v.u, v.w, p);

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(kNz, kNz);
  jac.block<21, 21>(0, 0) = j.a;
  jac.block<21, 8>(0, 21) = j.b1;
  jac.block<21, 1>(0, 29) = j.b2.col(0);
  jac.block<21, 1>(0, 30) = j.b2.col(1);
  jac(20, 31) = 1.0 / (2.0 * p.gde.h); // d(d omega_f/dt) / d p_m_rest
  jac.block<6, 21>(21, 0) = j.c;
  jac(27, 6) = 1.0;
  jac(28, 16) = 1.0;
  jac(29, 20) = 1.0;
  if (pin.mode == SpeedPinning::Mode::FixedSpeed) {
    jac(30, 9) = 1.0;
    jac(31, 19) = 1.0;
  } else {
    jac(30, 29) = 1.0;
    jac(30, 9) = -pin.dp_m1(v.x.m1.omega_r);
    jac(31, 30) = 1.0;
    jac(31, 19) = -pin.dp_m2(v.x.m2.omega_r);
  }
  return jac;
}

// Structured warm start: the machine chain is nearly closed-form once
// (v_dc, omega_r, omega_f) are fixed, which makes Newton reliable.
Eigen::VectorXd initial_guess(const Setpoints &sp, const PlantParams &params,
                              const SpeedPinning &pin) {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(kNz);
  const double wfb = params.base.omega_fb;
  const double wb = params.base.omega_b;

  struct MachineRefs {
    double p_ref, v_dc, omega;
    const PmsgParams *mp;
  };
  const MachineRefs refs[2] = {
      {sp.p_ref_1, sp.v_dc_ref_1,
       pin.mode == SpeedPinning::Mode::FixedSpeed ? pin.omega_ref_1
                                                  : pin.omega_guess_1,
       &params.m1},
      {sp.p_ref_2, sp.v_dc_ref_2,
       pin.mode == SpeedPinning::Mode::FixedSpeed ? pin.omega_ref_2
                                                  : pin.omega_guess_2,
       &params.m2}};

  // first pass: grid currents from the power target
  double i2d[2], i2q[2];
  for (int k = 0; k < 2; ++k) {
    const double n = refs[k].mp->n_tr;
    i2d[k] = refs[k].p_ref * n / params.net.v_inf;
    i2q[k] = 0.0;
  }

  for (int k = 0; k < 2; ++k) {
    const PmsgParams &mp = *refs[k].mp;
    const int o = 10 * k;
    const double omega = refs[k].omega;
    const double v_dc = refs[k].v_dc;
    const auto [vbd, vbq] =
        params.net.bus_voltage_dq(k + 1, i2d[0], i2q[0], i2d[1], i2q[1]);

    const double v_cfd = mp.r_2f * i2d[k] - mp.l_2f * i2q[k] + vbd / mp.n_tr;
    const double v_cfq = mp.r_2f * i2q[k] + mp.l_2f * i2d[k] + vbq / mp.n_tr;
    const double i1d = i2d[k] - mp.c_f * v_cfq;
    const double i1q = i2q[k] + mp.c_f * v_cfd;
    const double k_p = 1.5 * (wb / wfb) *
                       static_cast<double>(mp.pole_pairs) * mp.psi_f;
    const double i_sq = refs[k].p_ref / (k_p * omega);
    const double ratio = wb * static_cast<double>(mp.pole_pairs) / wfb;

    z(o + 0) = i1d;
    z(o + 1) = i1q;
    z(o + 2) = i2d[k];
    z(o + 3) = i2q[k];
    z(o + 4) = v_cfd;
    z(o + 5) = v_cfq;
    z(o + 6) = 0.0;
    z(o + 7) = i_sq;
    z(o + 8) = v_dc;
    z(o + 9) = omega;

    const int u0 = 21 + 4 * k;
    z(u0 + 0) = 2.0 * (mp.r_1f * i1d - mp.l_1f * i1q + v_cfd) / v_dc;
    z(u0 + 1) = 2.0 * (mp.r_1f * i1q + mp.l_1f * i1d + v_cfq) / v_dc;
    z(u0 + 2) = 2.0 * ratio * omega * mp.l_s * i_sq / v_dc;
    z(u0 + 3) = 2.0 * (-mp.r_s * i_sq + ratio * mp.psi_f * omega) / v_dc;

    const double torque_e = k_p * i_sq;
    z(29 + k) = omega * (torque_e + mp.d_l * omega);
  }

  z(20) = 1.0;
  PlantState xg = PlantState::from_vector(z.head<21>());
  z(31) = params.gde.p_l0 - injected_power(xg, params.net);
  return z;
}

} // namespace

Equilibrium find_equilibrium(const Setpoints &sp, const PlantParams &params,
                             const SpeedPinning &pin) {
  if (pin.mode == SpeedPinning::Mode::AeroPower &&
      (!pin.p_m1 || !pin.p_m2 || !pin.dp_m1 || !pin.dp_m2))
    throw ConfigError("aero-power pinning requires P_m(omega) callbacks");

  Eigen::VectorXd z = initial_guess(sp, params, pin);
  Eigen::VectorXd f = residual_map(z, sp, params, pin);

  constexpr int kMaxIter = 60;
  constexpr double kTol = 1e-11;
  int iter = 0;
  for (; iter < kMaxIter && f.lpNorm<Eigen::Infinity>() > kTol; ++iter) {
    const Eigen::MatrixXd jac = residual_jacobian(z, params, pin);
    const Eigen::VectorXd step = jac.fullPivLu().solve(-f);
    if (!step.allFinite())
      throw NoConvergence("equilibrium Newton step is not finite");

    // backtracking on the residual norm; keep the physical guards happy
    const double f0 = f.norm();
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt, alpha *= 0.5) {
      const Eigen::VectorXd zt = z + alpha * step;
      if (zt(8) <= 0.0 || zt(18) <= 0.0 || zt(9) <= 0.0 || zt(19) <= 0.0)
        continue;
      const Eigen::VectorXd ft = residual_map(zt, sp, params, pin);
      if (ft.norm() < f0 * (1.0 - 1e-4 * alpha)) {
        z = zt;
        f = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw NoConvergence("equilibrium Newton stalled at residual " +
                          std::to_string(f0));
  }
  if (f.lpNorm<Eigen::Infinity>() > 1e-9)
    throw NoConvergence("equilibrium Newton did not reach tolerance");

  Equilibrium eq;
  const Unpacked v = unpack(z, params);
  eq.x = v.x;
  eq.u = v.u;
  eq.w = v.w;
  eq.p_m_rest = v.p_m_rest;
  eq.iterations = iter;

  ControlInput u_clamped = eq.u;
  if (u_clamped.clamp_modulation())
    throw InfeasibleSetpoint("operating point violates the modulation limit");

  PlantParams p_check = params;
  p_check.gde.p_m_rest = eq.p_m_rest;
  p_check.gde.secondary_enabled = false;
  eq.residual = pmsg_derivatives(eq.x, eq.u, eq.w, p_check)
                    .to_vector()
                    .lpNorm<Eigen::Infinity>();
  return eq;
}

} // namespace ppm::plant
