// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_PLANT_NETWORK_HPP
#define PPM_PLANT_NETWORK_HPP

#include <complex>
#include <optional>

namespace ppm::plant {

enum class Line { X1, X2 };

/// Description of an applied three-phase metallic short circuit: the fault
/// node sits at `fraction` along the line, tied to zero voltage.
struct FaultSpec {
  Line line = Line::X1;
  double fraction = 0.5;
};

/// Linear reduction of the star network (machine buses 1 and 2 behind lines
/// x_1/x_2 to a common bus, then x_inf to the infinite bus V).
///
/// Bus voltages, dq components per machine k:
///   v_kd = a_kd*i_21d + b_kd*i_21q + c_kd*i_22d + d_kd*i_22q + e_kd*V
/// and the power injected into the grid equivalent:
///   p_e  = a_pe*i_21d + b_pe*i_21q + c_pe*i_22d + d_pe*i_22q
///
/// Coefficients are derived from the raw reactances by nodal analysis; the
/// raw values are kept so a consistency check can re-derive one from the
/// other and so faults can be applied on the unreduced topology.
struct NetworkCoupling {
  struct AxisCoeffs {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0;
  };

  AxisCoeffs r1d, r1q; // machine 1 bus voltage, d and q axis
  AxisCoeffs r2d, r2q; // machine 2 bus voltage

  double a_pe = 0.0, b_pe = 0.0, c_pe = 0.0, d_pe = 0.0;

  double v_inf = 1.0; // infinite bus magnitude [pu]
  double x_inf = 0.0027;
  double x_1 = 0.12;
  double x_2 = 0.12;
  double n_1 = 1.0;
  double n_2 = 1.0;

  std::optional<FaultSpec> fault; // present while a short circuit is applied

  /// Machine-k bus voltage (d, q) for the given grid-side currents.
  std::pair<double, double> bus_voltage_dq(int machine, double i21d, double i21q,
                                           double i22d, double i22q) const;

  /// Max abs difference between the stored coefficients and the ones
  /// re-derived from (x_1, x_2, x_inf, v_inf, n_1, n_2).
  double consistency_residual() const;
};

/// Nodal reduction of the healthy star network.
NetworkCoupling reduce_star_network(double x_1, double x_2, double x_inf,
                                    double v_inf, double n_1, double n_2);

/// Re-derives the coupling with a zero-voltage fault node at `fraction`
/// along the given line. The input coupling is left untouched; restoring
/// is keeping (or re-deriving) the healthy object.
NetworkCoupling apply_short_circuit(const NetworkCoupling &net, Line line,
                                    double fraction);

/// Direct nodal solution of the (possibly faulted) network: returns the
/// complex voltages (v_d + j v_q) at machine buses 1, 2 and the common bus,
/// given machine grid-side currents in their own dq components. Used as the
/// independent oracle for the reduced coefficients.
struct NodalSolution {
  std::complex<double> v1, v2, v_common;
  double p_injected; // active power absorbed by the grid equivalent at bus B
};

NodalSolution solve_nodal(const NetworkCoupling &net, double i21d, double i21q,
                          double i22d, double i22q);

} // namespace ppm::plant

#endif
