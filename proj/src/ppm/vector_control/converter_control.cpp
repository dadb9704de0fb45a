// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/vector_control/converter_control.hpp"

#include <algorithm>
#include <cmath>

#include "ppm/common/errors.hpp"

namespace ppm::vector_control {

namespace {
constexpr double kCurrentLimit = 1.5; // outer-loop current reference cap [pu]

double ref_filter(double &state, double target, double tau, double dt) {
  const double a = std::exp(-dt / tau);
  state = a * state + (1.0 - a) * target;
  return state;
}
} // namespace

void VectorControlConfig::validate() const {
  if (tau_i <= 0.0 || tau_o <= 0.0)
    throw ConfigError("vector-control time constants must be > 0");
  if (tau_o < 10.0 * tau_i)
    throw ConfigError("outer loop must be 10-100x slower than the inner loop");
  if (duty_limit <= 0.0 || duty_limit > 1.0)
    throw ConfigError("duty limit must lie in (0, 1]");
}

GscController::GscController(const VectorControlConfig &cfg,
                             const plant::PmsgParams &mp,
                             const plant::BaseQuantities &base,
                             const plant::PmsgStates &op,
                             double duty_d0, double duty_q0)
    : cfg_(cfg), l_1f_(mp.l_1f), duty_limit_(cfg.duty_limit) {
  cfg.validate();

  const PiGains inner =
      tune_inner_loop(mp.r_1f, mp.l_1f, cfg.zeta_i, cfg.tau_i, base.omega_fb);
  const double v_lim = 1.2 * op.v_dc; // generous; the duty clamp governs
  pi_id_ = PiController(inner, -v_lim, v_lim);
  pi_iq_ = PiController(inner, -v_lim, v_lim);

  // DC-link plant is an integrator in i_1d with gain -k3 * duty_d0
  const double k3 = base.omega_fb * 3.0 / (4.0 * mp.c_dc);
  const double g_vdc = -k3 * duty_d0;
  sign_vdc_ = g_vdc < 0.0 ? -1.0 : 1.0;
  const PiGains vdc_gains =
      tune_outer_integrating(std::abs(g_vdc), cfg.zeta_o, cfg.tau_o);
  pi_vdc_ = PiController(vdc_gains, -kCurrentLimit, kCurrentLimit);
  tau_ref_vdc_ = vdc_gains.t_i; // cancels the PI zero

  // Q plant is (to first order) the static gain -v_cfd
  const double g_q = -op.v_cfd;
  sign_q_ = g_q < 0.0 ? -1.0 : 1.0;
  const PiGains q_gains = tune_outer_static(std::max(std::abs(g_q), 0.1),
                                            cfg.tau_i, cfg.zeta_o, cfg.tau_o);
  pi_q_ = PiController(q_gains, -kCurrentLimit, kCurrentLimit);
  tau_ref_q_ = q_gains.t_i;

  // bumpless start at the operating point
  pi_vdc_.preload_output(sign_vdc_ * op.i_1d);
  pi_q_.preload_output(sign_q_ * op.i_1q);
  id_ref_filt_ = op.i_1d;
  iq_ref_filt_ = op.i_1q;
  const double u_d0 = 0.5 * duty_d0 * op.v_dc;
  const double u_q0 = 0.5 * duty_q0 * op.v_dc;
  const double ff_d0 = op.v_cfd - l_1f_ * op.i_1q; // omega_f = 1 at the point
  const double ff_q0 = op.v_cfq + l_1f_ * op.i_1d;
  pi_id_.preload_output(u_d0 - ff_d0);
  pi_iq_.preload_output(u_q0 - ff_q0);
}

std::pair<double, double> GscController::step(const GscMeasurements &m,
                                              double v_dc_ref, double q_ref,
                                              double dt) {
  const double q_meas = m.i_1d * m.v_cfq - m.i_1q * m.v_cfd;

  const double id_raw = sign_vdc_ * pi_vdc_.step(v_dc_ref - m.v_dc, dt);
  const double iq_raw = sign_q_ * pi_q_.step(q_ref - q_meas, dt);
  ref_filter(id_ref_filt_, id_raw, tau_ref_vdc_, dt);
  ref_filter(iq_ref_filt_, iq_raw, tau_ref_q_, dt);

  const double v_pi_d = pi_id_.step(id_ref_filt_ - m.i_1d, dt);
  const double v_pi_q = pi_iq_.step(iq_ref_filt_ - m.i_1q, dt);
  const double u_d = m.v_cfd - m.omega_f * l_1f_ * m.i_1q + v_pi_d;
  const double u_q = m.v_cfq + m.omega_f * l_1f_ * m.i_1d + v_pi_q;

  const double b_d =
      std::clamp(2.0 * u_d / m.v_dc, -duty_limit_, duty_limit_);
  const double b_q =
      std::clamp(2.0 * u_q / m.v_dc, -duty_limit_, duty_limit_);
  return {b_d, b_q};
}

MscController::MscController(const VectorControlConfig &cfg,
                             const plant::PmsgParams &mp,
                             const plant::BaseQuantities &base,
                             const plant::PmsgStates &op,
                             double duty_d0, double duty_q0)
    : cfg_(cfg), l_s_(mp.l_s), r_s_(mp.r_s), duty_limit_(cfg.duty_limit) {
  cfg.validate();
  const double p = static_cast<double>(mp.pole_pairs);
  k_torque_ = 1.5 * (base.omega_b / base.omega_fb) * p * mp.psi_f;
  emf_ratio_ = base.omega_b * p / base.omega_fb;
  psi_f_ = mp.psi_f;

  const PiGains inner =
      tune_inner_loop(mp.r_s, mp.l_s, cfg.zeta_i, cfg.tau_i, base.omega_fb);
  const double v_lim = 1.2 * op.v_dc;
  pi_id_ = PiController(inner, -v_lim, v_lim);
  pi_iq_ = PiController(inner, -v_lim, v_lim);

  const PiGains outer = tune_outer_static(k_torque_ * op.omega_r, cfg.tau_i,
                                          cfg.zeta_o, cfg.tau_o);
  pi_p_ = PiController(outer, -kCurrentLimit, kCurrentLimit);
  tau_ref_p_ = outer.t_i;

  isq_ref_filt_ = op.i_sq;
  pi_p_.preload_output(0.0); // the feedforward carries the operating point
  const double u_d0 = 0.5 * duty_d0 * op.v_dc;
  const double u_q0 = 0.5 * duty_q0 * op.v_dc;
  const double ff_d0 = emf_ratio_ * op.omega_r * l_s_ * op.i_sq;
  const double ff_q0 = emf_ratio_ * op.omega_r * (psi_f_ - l_s_ * op.i_sd);
  pi_id_.preload_output(ff_d0 - u_d0);
  pi_iq_.preload_output(ff_q0 - u_q0);
}

std::pair<double, double> MscController::step(const MscMeasurements &m,
                                              double p_ref, double p_meas,
                                              double dt) {
  const double omega = std::max(m.omega_r, 0.1);
  const double isq_ff = p_ref / (k_torque_ * omega);
  const double isq_raw =
      std::clamp(isq_ff + pi_p_.step(p_ref - p_meas, dt), -kCurrentLimit,
                 kCurrentLimit);
  ref_filter(isq_ref_filt_, isq_raw, tau_ref_p_, dt);

  // zero d-axis current strategy
  const double v_pi_d = pi_id_.step(0.0 - m.i_sd, dt);
  const double v_pi_q = pi_iq_.step(isq_ref_filt_ - m.i_sq, dt);
  const double ff_d = emf_ratio_ * m.omega_r * l_s_ * m.i_sq;
  const double ff_q = emf_ratio_ * m.omega_r * (psi_f_ - l_s_ * m.i_sd);
  const double u_d = ff_d - v_pi_d;
  const double u_q = ff_q - v_pi_q;

  const double b_d =
      std::clamp(2.0 * u_d / m.v_dc, -duty_limit_, duty_limit_);
  const double b_q =
      std::clamp(2.0 * u_q / m.v_dc, -duty_limit_, duty_limit_);
  return {b_d, b_q};
}

} // namespace ppm::vector_control
