// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/plant/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "ppm/common/errors.hpp"

namespace ppm::plant {

Eigen::VectorXd PlantState::to_vector() const {
  Eigen::VectorXd x(kDim);
  x << m1.i_1d, m1.i_1q, m1.i_2d, m1.i_2q, m1.v_cfd, m1.v_cfq, m1.i_sd,
      m1.i_sq, m1.v_dc, m1.omega_r, //
      m2.i_1d, m2.i_1q, m2.i_2d, m2.i_2q, m2.v_cfd, m2.v_cfq, m2.i_sd,
      m2.i_sq, m2.v_dc, m2.omega_r, //
      omega_f;
  return x;
}

PlantState PlantState::from_vector(const Eigen::Ref<const Eigen::VectorXd> &x) {
  if (x.size() != kDim)
    throw DimensionMismatch("plant state vector must have 21 entries");
  PlantState s;
  s.m1 = {x(0), x(1), x(2), x(3), x(4), x(5), x(6), x(7), x(8), x(9)};
  s.m2 = {x(10), x(11), x(12), x(13), x(14), x(15), x(16), x(17), x(18), x(19)};
  s.omega_f = x(20);
  return s;
}

Eigen::VectorXd ControlInput::to_vector() const {
  Eigen::VectorXd u(kDim);
  u << b_11d, b_11q, b_s1d, b_s1q, b_12d, b_12q, b_s2d, b_s2q;
  return u;
}

ControlInput
ControlInput::from_vector(const Eigen::Ref<const Eigen::VectorXd> &u) {
  if (u.size() != kDim)
    throw DimensionMismatch("control input vector must have 8 entries");
  return {u(0), u(1), u(2), u(3), u(4), u(5), u(6), u(7)};
}

bool ControlInput::clamp_modulation() {
  bool clipped = false;
  for (double *b : {&b_11d, &b_11q, &b_s1d, &b_s1q, &b_12d, &b_12q, &b_s2d,
                    &b_s2q}) {
    if (*b > 1.0) {
      *b = 1.0;
      clipped = true;
    } else if (*b < -1.0) {
      *b = -1.0;
      clipped = true;
    }
  }
  return clipped;
}

Eigen::VectorXd DisturbanceInput::to_vector() const {
  Eigen::VectorXd w(kDim);
  w << p_m1, p_m2, p_l;
  return w;
}

DisturbanceInput
DisturbanceInput::from_vector(const Eigen::Ref<const Eigen::VectorXd> &w) {
  if (w.size() != kDim)
    throw DimensionMismatch("disturbance vector must have 3 entries");
  return {w(0), w(1), w(2)};
}

Eigen::VectorXd OutputVector::to_vector() const {
  Eigen::VectorXd y(kDim);
  y << q_1, p_1, v_dc1, q_2, p_2, v_dc2;
  return y;
}

void PlantParams::validate() const {
  base.validate();
  m1.validate();
  m2.validate();
  gde.validate();
  if (net.consistency_residual() > 1e-9)
    throw ConfigError("network coupling coefficients are inconsistent with "
                      "the stored reactances");
}

namespace {

struct MachineDeriv {
  PmsgStates d;
};

// One machine's equations. v_bus is the reduced-network voltage at this
// machine's connection point, already in its dq components.
PmsgStates machine_derivatives(const PmsgStates &s, double b_1d, double b_1q,
                               double b_sd, double b_sq, double p_m,
                               double omega_f, double v_bus_d, double v_bus_q,
                               const PmsgParams &mp,
                               const BaseQuantities &base) {
  const double wfb = base.omega_fb;
  const double wb = base.omega_b;
  const double p = static_cast<double>(mp.pole_pairs);

  PmsgStates d;
  d.i_1d = wfb * (-mp.r_1f * s.i_1d / mp.l_1f + omega_f * s.i_1q -
                  s.v_cfd / mp.l_1f + 0.5 * b_1d * s.v_dc / mp.l_1f);
  d.i_1q = wfb * (-mp.r_1f * s.i_1q / mp.l_1f - omega_f * s.i_1d -
                  s.v_cfq / mp.l_1f + 0.5 * b_1q * s.v_dc / mp.l_1f);
  d.i_2d = wfb * (-mp.r_2f * s.i_2d / mp.l_2f + omega_f * s.i_2q +
                  s.v_cfd / mp.l_2f - v_bus_d / (mp.l_2f * mp.n_tr));
  d.i_2q = wfb * (-mp.r_2f * s.i_2q / mp.l_2f - omega_f * s.i_2d +
                  s.v_cfq / mp.l_2f - v_bus_q / (mp.l_2f * mp.n_tr));
  d.v_cfd = wfb * ((s.i_1d - s.i_2d) / mp.c_f + omega_f * s.v_cfq);
  d.v_cfq = wfb * ((s.i_1q - s.i_2q) / mp.c_f - omega_f * s.v_cfd);
  d.i_sd = -wfb * mp.r_s * s.i_sd / mp.l_s + wb * p * s.omega_r * s.i_sq -
           0.5 * wfb * b_sd * s.v_dc / mp.l_s;
  d.i_sq = -wfb * mp.r_s * s.i_sq / mp.l_s - wb * p * s.omega_r * s.i_sd +
           wb * p * mp.psi_f * s.omega_r / mp.l_s -
           0.5 * wfb * b_sq * s.v_dc / mp.l_s;
  d.v_dc = wfb * (3.0 / (4.0 * mp.c_dc)) *
           (-b_1d * s.i_1d - b_1q * s.i_1q + b_sd * s.i_sd + b_sq * s.i_sq);
  const double torque_e = (wb / wfb) * 1.5 * p * mp.psi_f * s.i_sq;
  d.omega_r = (p_m / s.omega_r - torque_e - mp.d_l * s.omega_r) /
              (2.0 * mp.h_t);
  return d;
}

} // namespace

PlantState pmsg_derivatives(const PlantState &x, const ControlInput &u,
                            const DisturbanceInput &w, const PlantParams &p) {
  if (x.m1.omega_r <= 0.0 || x.m2.omega_r <= 0.0)
    throw NonPhysicalState("rotor speed must stay positive");
  if (x.m1.v_dc <= 0.0 || x.m2.v_dc <= 0.0)
    throw NonPhysicalState("DC-link voltage must stay positive");

  const auto [v1d, v1q] =
      p.net.bus_voltage_dq(1, x.m1.i_2d, x.m1.i_2q, x.m2.i_2d, x.m2.i_2q);
  const auto [v2d, v2q] =
      p.net.bus_voltage_dq(2, x.m1.i_2d, x.m1.i_2q, x.m2.i_2d, x.m2.i_2q);

  PlantState d;
  d.m1 = machine_derivatives(x.m1, u.b_11d, u.b_11q, u.b_s1d, u.b_s1q, w.p_m1,
                             x.omega_f, v1d, v1q, p.m1, p.base);
  d.m2 = machine_derivatives(x.m2, u.b_12d, u.b_12q, u.b_s2d, u.b_s2q, w.p_m2,
                             x.omega_f, v2d, v2q, p.m2, p.base);

  const double p_e = injected_power(x, p.net);
  double p_g = p.gde.p_m_rest + p_e;
  if (p.gde.secondary_enabled)
    p_g -= p.gde.k_sec * x.zeta_sec;
  d.omega_f =
      (p_g - w.p_l - p.gde.d_u * (x.omega_f - 1.0)) / (2.0 * p.gde.h);
  d.theta_f = p.base.omega_fb * x.omega_f;
  d.zeta_sec = p.gde.secondary_enabled ? (x.omega_f - 1.0) : 0.0;
  return d;
}

double injected_power(const PlantState &x, const NetworkCoupling &net) {
  return net.a_pe * x.m1.i_2d + net.b_pe * x.m1.i_2q + net.c_pe * x.m2.i_2d +
         net.d_pe * x.m2.i_2q;
}

std::pair<double, double> active_power(const PlantState &x,
                                       const PlantParams &p) {
  const double k1 = 1.5 * (p.base.omega_b / p.base.omega_fb) *
                    static_cast<double>(p.m1.pole_pairs) * p.m1.psi_f;
  const double k2 = 1.5 * (p.base.omega_b / p.base.omega_fb) *
                    static_cast<double>(p.m2.pole_pairs) * p.m2.psi_f;
  return {k1 * x.m1.i_sq * x.m1.omega_r, k2 * x.m2.i_sq * x.m2.omega_r};
}

std::pair<double, double> reactive_power(const PlantState &x) {
  return {x.m1.i_1d * x.m1.v_cfq - x.m1.i_1q * x.m1.v_cfd,
          x.m2.i_1d * x.m2.v_cfq - x.m2.i_1q * x.m2.v_cfd};
}

OutputVector outputs(const PlantState &x, const PlantParams &p) {
  const auto [p1, p2] = active_power(x, p);
  const auto [q1, q2] = reactive_power(x);
  return {q1, p1, x.m1.v_dc, q2, p2, x.m2.v_dc};
}

std::array<double, 3> gde_bus_voltage(double theta_f, double v) {
  constexpr double two_thirds_pi = 2.0 * M_PI / 3.0;
  return {v * std::sin(theta_f), v * std::sin(theta_f - two_thirds_pi),
          v * std::sin(theta_f + two_thirds_pi)};
}

namespace {
double pitch_rate(double beta, double beta_ref, const PmsgParams &mp) {
  double rate = (beta_ref - beta) / mp.tau_c;
  rate = std::clamp(rate, mp.dbeta_min, mp.dbeta_max);
  // Stop at the position limits instead of integrating past them.
  if ((beta >= mp.beta_max && rate > 0.0) ||
      (beta <= mp.beta_min && rate < 0.0))
    rate = 0.0;
  return rate;
}
} // namespace

PitchState pitch_dynamics(const PitchState &pitch, double beta_ref_1,
                          double beta_ref_2, const PmsgParams &m1,
                          const PmsgParams &m2) {
  return {pitch_rate(pitch.beta_1, beta_ref_1, m1),
          pitch_rate(pitch.beta_2, beta_ref_2, m2)};
}

} // namespace ppm::plant
