// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_PLANT_DYNAMICS_HPP
#define PPM_PLANT_DYNAMICS_HPP

#include <Eigen/Dense>

#include <array>

#include "ppm/plant/network.hpp"
#include "ppm/plant/params.hpp"

namespace ppm::plant {

/// The ten electrical/mechanical states of one PMSG.
struct PmsgStates {
  double i_1d = 0.0, i_1q = 0.0;   // converter-side filter current [pu]
  double i_2d = 0.0, i_2q = 0.0;   // grid-side current [pu]
  double v_cfd = 0.0, v_cfq = 0.0; // filter capacitor voltage [pu]
  double i_sd = 0.0, i_sq = 0.0;   // stator current [pu]
  double v_dc = 1.0;               // DC-link voltage [pu]
  double omega_r = 1.0;            // rotor speed [pu]
};

/// Full plant state: two machines plus the grid-equivalent frequency.
/// theta_f and zeta_sec ride along for waveform export and the optional
/// secondary integrator; the canonical state vector has 21 entries.
struct PlantState {
  PmsgStates m1, m2;
  double omega_f = 1.0; // grid frequency [pu]
  double theta_f = 0.0; // grid voltage phase [rad]
  double zeta_sec = 0.0;

  static constexpr int kDim = 21;

  Eigen::VectorXd to_vector() const;
  static PlantState from_vector(const Eigen::Ref<const Eigen::VectorXd> &x);
};

/// Converter duty-ratio components, |each| <= 1 after clamping.
struct ControlInput {
  double b_11d = 0.0, b_11q = 0.0; // machine 1 grid-side converter
  double b_s1d = 0.0, b_s1q = 0.0; // machine 1 machine-side converter
  double b_12d = 0.0, b_12q = 0.0; // machine 2 grid-side converter
  double b_s2d = 0.0, b_s2q = 0.0; // machine 2 machine-side converter

  static constexpr int kDim = 8;

  Eigen::VectorXd to_vector() const;
  static ControlInput from_vector(const Eigen::Ref<const Eigen::VectorXd> &u);

  /// Clamps every component to [-1, 1]. Returns true when anything clipped.
  bool clamp_modulation();
};

struct DisturbanceInput {
  double p_m1 = 0.0; // turbine mechanical power, machine 1 [pu]
  double p_m2 = 0.0;
  double p_l = 0.0; // grid load [pu]

  static constexpr int kDim = 3;

  Eigen::VectorXd to_vector() const;
  static DisturbanceInput
  from_vector(const Eigen::Ref<const Eigen::VectorXd> &w);
};

/// Regulated outputs in the fixed order (Q1, P1, vDC1, Q2, P2, vDC2).
struct OutputVector {
  double q_1 = 0.0, p_1 = 0.0, v_dc1 = 0.0;
  double q_2 = 0.0, p_2 = 0.0, v_dc2 = 0.0;

  static constexpr int kDim = 6;

  Eigen::VectorXd to_vector() const;
};

struct PitchState {
  double beta_1 = 0.0, beta_2 = 0.0; // blade pitch [deg]
};

/// Parameter bundle of the two-machine control model.
struct PlantParams {
  BaseQuantities base;
  PmsgParams m1, m2;
  NetworkCoupling net;
  GridEquivalentParams gde;

  void validate() const;
};

/// Time derivative of the full state, one line per model equation. Throws
/// NonPhysicalState when a rotor speed or DC-link voltage is non-positive.
PlantState pmsg_derivatives(const PlantState &x, const ControlInput &u,
                            const DisturbanceInput &w, const PlantParams &p);

/// Power injected by the two machines into the grid equivalent.
double injected_power(const PlantState &x, const NetworkCoupling &net);

/// Generator-side active power of both machines.
std::pair<double, double> active_power(const PlantState &x,
                                       const PlantParams &p);

/// Reactive power measured at the LCL filter capacitors.
std::pair<double, double> reactive_power(const PlantState &x);

OutputVector outputs(const PlantState &x, const PlantParams &p);

/// Three-phase grid-equivalent bus voltage at phase theta_f.
std::array<double, 3> gde_bus_voltage(double theta_f, double v);

/// Pitch servo derivative with the rate limit applied; the position limit
/// is enforced by zeroing the derivative at a bound that is being pushed.
PitchState pitch_dynamics(const PitchState &pitch, double beta_ref_1,
                          double beta_ref_2, const PmsgParams &m1,
                          const PmsgParams &m2);

} // namespace ppm::plant

#endif
