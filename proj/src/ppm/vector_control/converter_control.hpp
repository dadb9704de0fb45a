// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_VECTOR_CONTROL_CONVERTER_CONTROL_HPP
#define PPM_VECTOR_CONTROL_CONVERTER_CONTROL_HPP

#include "ppm/plant/dynamics.hpp"
#include "ppm/vector_control/pi.hpp"
#include "ppm/vector_control/tuning.hpp"

namespace ppm::vector_control {

/// Two-layer cascade tuning. The outer loops must be 10-100x slower than
/// the inner current loops for the loop-at-a-time design to hold.
struct VectorControlConfig {
  double zeta_i = 0.7;
  double tau_i = 0.005; // inner current-loop time constant [s]
  double zeta_o = 0.7;
  double tau_o = 0.1; // outer voltage/power-loop time constant [s]
  double duty_limit = 1.0;

  void validate() const;
};

struct GscMeasurements {
  double i_1d, i_1q;   // converter-side currents
  double v_cfd, v_cfq; // capacitor voltages
  double v_dc;
  double omega_f;
};

/// Grid-side converter: outer PI loops produce i_d* from the DC-voltage
/// error and i_q* from the Q error; filtered references feed the inner
/// current PIs with the omega*L cross-coupling feedforward.
class GscController {
public:
  GscController() = default;
  GscController(const VectorControlConfig &cfg, const plant::PmsgParams &mp,
                const plant::BaseQuantities &base,
                const plant::PmsgStates &op_state, double duty_d0,
                double duty_q0);

  /// Returns the duty-ratio pair (b_1d, b_1q).
  std::pair<double, double> step(const GscMeasurements &m, double v_dc_ref,
                                 double q_ref, double dt);

private:
  VectorControlConfig cfg_;
  double l_1f_ = 0.2;
  double duty_limit_ = 1.0;
  double sign_vdc_ = -1.0; // exporting d-current discharges the DC link
  double sign_q_ = -1.0;   // dQ/di_1q = -v_cfd < 0 at normal voltage
  PiController pi_vdc_, pi_q_, pi_id_, pi_iq_;
  double id_ref_filt_ = 0.0, iq_ref_filt_ = 0.0;
  double tau_ref_vdc_ = 0.0, tau_ref_q_ = 0.0;
};

struct MscMeasurements {
  double i_sd, i_sq;
  double v_dc;
  double omega_r;
};

/// Machine-side converter: power outer loop generates i_sq*, the d-axis
/// reference is held at zero, inner PIs add the back-EMF feedforward.
class MscController {
public:
  MscController() = default;
  MscController(const VectorControlConfig &cfg, const plant::PmsgParams &mp,
                const plant::BaseQuantities &base,
                const plant::PmsgStates &op_state, double duty_d0,
                double duty_q0);

  /// Returns the duty-ratio pair (b_sd, b_sq).
  std::pair<double, double> step(const MscMeasurements &m, double p_ref,
                                 double p_meas, double dt);

private:
  VectorControlConfig cfg_;
  double l_s_ = 0.4;
  double r_s_ = 0.006;
  double psi_f_ = 1.0;
  double k_torque_ = 1.5; // P = k_torque * i_sq * omega_r
  double emf_ratio_ = 1.0; // omega_b * p / omega_fb
  double duty_limit_ = 1.0;
  PiController pi_p_, pi_id_, pi_iq_;
  double isq_ref_filt_ = 0.0;
  double tau_ref_p_ = 0.0;
};

} // namespace ppm::vector_control

#endif
