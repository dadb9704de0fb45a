// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/plant/jacobians.hpp"

#include "ppm/common/errors.hpp"

namespace ppm::plant {

namespace {

// Grid-side current indices in the 21-vector: machine 1 at (2,3),
// machine 2 at (12,13). The network couples every machine to all four.
constexpr int kI21d = 2, kI21q = 3, kI22d = 12, kI22q = 13, kOmegaF = 20;

void machine_blocks(Eigen::MatrixXd &a, Eigen::MatrixXd &b1,
                    Eigen::MatrixXd &b2, int o, int u0, int w_pm,
                    const PmsgStates &s, double b_1d, double b_1q, double b_sd,
                    double b_sq, double p_m, double omega_f,
                    const NetworkCoupling::AxisCoeffs &dc,
                    const NetworkCoupling::AxisCoeffs &qc,
                    const PmsgParams &mp, const BaseQuantities &base) {
  const double wfb = base.omega_fb;
  const double wb = base.omega_b;
  const double p = static_cast<double>(mp.pole_pairs);

  // converter-side currents
  a(o + 0, o + 0) = -wfb * mp.r_1f / mp.l_1f;
  a(o + 0, o + 1) = wfb * omega_f;
  a(o + 0, o + 4) = -wfb / mp.l_1f;
  a(o + 0, o + 8) = 0.5 * wfb * b_1d / mp.l_1f;
  a(o + 0, kOmegaF) = wfb * s.i_1q;
  b1(o + 0, u0 + 0) = 0.5 * wfb * s.v_dc / mp.l_1f;

  a(o + 1, o + 1) = -wfb * mp.r_1f / mp.l_1f;
  a(o + 1, o + 0) = -wfb * omega_f;
  a(o + 1, o + 5) = -wfb / mp.l_1f;
  a(o + 1, o + 8) = 0.5 * wfb * b_1q / mp.l_1f;
  a(o + 1, kOmegaF) = -wfb * s.i_1d;
  b1(o + 1, u0 + 1) = 0.5 * wfb * s.v_dc / mp.l_1f;

  // grid-side currents: own RL dynamics plus reduced-network voltage
  const double knet = wfb / (mp.l_2f * mp.n_tr);
  a(o + 2, o + 2) = -wfb * mp.r_2f / mp.l_2f;
  a(o + 2, o + 3) = wfb * omega_f;
  a(o + 2, o + 4) = wfb / mp.l_2f;
  a(o + 2, kOmegaF) = wfb * s.i_2q;
  a(o + 2, kI21d) -= knet * dc.a;
  a(o + 2, kI21q) -= knet * dc.b;
  a(o + 2, kI22d) -= knet * dc.c;
  a(o + 2, kI22q) -= knet * dc.d;

  a(o + 3, o + 3) = -wfb * mp.r_2f / mp.l_2f;
  a(o + 3, o + 2) += -wfb * omega_f;
  a(o + 3, o + 5) = wfb / mp.l_2f;
  a(o + 3, kOmegaF) = -wfb * s.i_2d;
  a(o + 3, kI21d) -= knet * qc.a;
  a(o + 3, kI21q) -= knet * qc.b;
  a(o + 3, kI22d) -= knet * qc.c;
  a(o + 3, kI22q) -= knet * qc.d;

  // filter capacitor voltages
  a(o + 4, o + 0) = wfb / mp.c_f;
  a(o + 4, o + 2) += -wfb / mp.c_f;
  a(o + 4, o + 5) += wfb * omega_f;
  a(o + 4, kOmegaF) += wfb * s.v_cfq;
  a(o + 5, o + 1) = wfb / mp.c_f;
  a(o + 5, o + 3) += -wfb / mp.c_f;
  a(o + 5, o + 4) += -wfb * omega_f;
  a(o + 5, kOmegaF) += -wfb * s.v_cfd;

  // stator currents
  a(o + 6, o + 6) = -wfb * mp.r_s / mp.l_s;
  a(o + 6, o + 7) = wb * p * s.omega_r;
  a(o + 6, o + 9) = wb * p * s.i_sq;
  a(o + 6, o + 8) = -0.5 * wfb * b_sd / mp.l_s;
  b1(o + 6, u0 + 2) = -0.5 * wfb * s.v_dc / mp.l_s;

  a(o + 7, o + 7) = -wfb * mp.r_s / mp.l_s;
  a(o + 7, o + 6) = -wb * p * s.omega_r;
  a(o + 7, o + 9) = -wb * p * s.i_sd + wb * p * mp.psi_f / mp.l_s;
  a(o + 7, o + 8) = -0.5 * wfb * b_sq / mp.l_s;
  b1(o + 7, u0 + 3) = -0.5 * wfb * s.v_dc / mp.l_s;

  // DC link
  const double k3 = wfb * 3.0 / (4.0 * mp.c_dc);
  a(o + 8, o + 0) = -k3 * b_1d;
  a(o + 8, o + 1) = -k3 * b_1q;
  a(o + 8, o + 6) = k3 * b_sd;
  a(o + 8, o + 7) = k3 * b_sq;
  b1(o + 8, u0 + 0) = -k3 * s.i_1d;
  b1(o + 8, u0 + 1) = -k3 * s.i_1q;
  b1(o + 8, u0 + 2) = k3 * s.i_sd;
  b1(o + 8, u0 + 3) = k3 * s.i_sq;

  // rotor speed
  const double inv2h = 1.0 / (2.0 * mp.h_t);
  a(o + 9, o + 9) = inv2h * (-p_m / (s.omega_r * s.omega_r) - mp.d_l);
  a(o + 9, o + 7) = -inv2h * (wb / wfb) * 1.5 * p * mp.psi_f;
  b2(o + 9, w_pm) = inv2h / s.omega_r;
}

} // namespace

Jacobians compute_jacobians(const PlantState &x, const ControlInput &u,
                            const DisturbanceInput &w, const PlantParams &p) {
  if (x.m1.omega_r <= 0.0 || x.m2.omega_r <= 0.0)
    throw NonPhysicalState("rotor speed must stay positive");

  Jacobians j;
  j.a = Eigen::MatrixXd::Zero(21, 21);
  j.b1 = Eigen::MatrixXd::Zero(21, 8);
  j.b2 = Eigen::MatrixXd::Zero(21, 3);
  j.c = Eigen::MatrixXd::Zero(6, 21);

  machine_blocks(j.a, j.b1, j.b2, 0, 0, 0, x.m1, u.b_11d, u.b_11q, u.b_s1d,
                 u.b_s1q, w.p_m1, x.omega_f, p.net.r1d, p.net.r1q, p.m1,
                 p.base);
  machine_blocks(j.a, j.b1, j.b2, 10, 4, 1, x.m2, u.b_12d, u.b_12q, u.b_s2d,
                 u.b_s2q, w.p_m2, x.omega_f, p.net.r2d, p.net.r2q, p.m2,
                 p.base);

  // grid-equivalent frequency row
  const double inv2h = 1.0 / (2.0 * p.gde.h);
  j.a(kOmegaF, kI21d) = inv2h * p.net.a_pe;
  j.a(kOmegaF, kI21q) = inv2h * p.net.b_pe;
  j.a(kOmegaF, kI22d) = inv2h * p.net.c_pe;
  j.a(kOmegaF, kI22q) = inv2h * p.net.d_pe;
  j.a(kOmegaF, kOmegaF) = -inv2h * p.gde.d_u;
  j.b2(kOmegaF, 2) = -inv2h;

  // outputs: Q from the capacitor voltages, P at the generator, vDC direct
  auto out_rows = [&](int row0, int o, const PmsgStates &s,
                      const PmsgParams &mp) {
    j.c(row0 + 0, o + 0) = s.v_cfq;
    j.c(row0 + 0, o + 1) = -s.v_cfd;
    j.c(row0 + 0, o + 4) = -s.i_1q;
    j.c(row0 + 0, o + 5) = s.i_1d;
    const double k = 1.5 * (p.base.omega_b / p.base.omega_fb) *
                     static_cast<double>(mp.pole_pairs) * mp.psi_f;
    j.c(row0 + 1, o + 7) = k * s.omega_r;
    j.c(row0 + 1, o + 9) = k * s.i_sq;
    j.c(row0 + 2, o + 8) = 1.0;
  };
  out_rows(0, 0, x.m1, p.m1);
  out_rows(3, 10, x.m2, p.m2);

  return j;
}

} // namespace ppm::plant
