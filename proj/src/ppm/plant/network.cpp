// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/plant/network.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "ppm/common/errors.hpp"

namespace ppm::plant {

namespace {

using Cx = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

constexpr Cx kJ{0.0, 1.0};

// Nodal admittance of the (possibly faulted) star network over the unknown
// nodes {bus1, bus2, common}. The infinite bus enters through the source
// term y_inf * V; a grounded fault node turns the two halves of the faulted
// line into shunt admittances.
struct Topology {
  Mat3 y = Mat3::Zero();
  Cx y_inf{};
};

Topology build_topology(double x_1, double x_2, double x_inf,
                        const std::optional<FaultSpec> &fault) {
  if (x_1 <= 0.0 || x_2 <= 0.0 || x_inf <= 0.0)
    throw ConfigError("network reactances must be > 0");

  Topology t;
  t.y_inf = 1.0 / (kJ * x_inf);
  const Cx y1 = 1.0 / (kJ * x_1);
  const Cx y2 = 1.0 / (kJ * x_2);

  auto add_branch = [&](int i, int j, Cx y) {
    t.y(i, i) += y;
    t.y(j, j) += y;
    t.y(i, j) -= y;
    t.y(j, i) -= y;
  };
  auto add_shunt = [&](int i, Cx y) { t.y(i, i) += y; };

  t.y(2, 2) += t.y_inf; // common bus to infinite bus

  if (fault && fault->line == Line::X1) {
    const double f = fault->fraction;
    add_shunt(0, 1.0 / (kJ * f * x_1));
    add_shunt(2, 1.0 / (kJ * (1.0 - f) * x_1));
    add_branch(1, 2, y2);
  } else if (fault && fault->line == Line::X2) {
    const double f = fault->fraction;
    add_shunt(1, 1.0 / (kJ * f * x_2));
    add_shunt(2, 1.0 / (kJ * (1.0 - f) * x_2));
    add_branch(0, 2, y1);
  } else {
    add_branch(0, 2, y1);
    add_branch(1, 2, y2);
  }
  return t;
}

Vec3 solve_topology(const Topology &t, Cx i1, Cx i2, double v) {
  Vec3 rhs;
  rhs << i1, i2, t.y_inf * v;
  return t.y.fullPivLu().solve(rhs);
}

NetworkCoupling reduce(double x_1, double x_2, double x_inf, double v_inf,
                       double n_1, double n_2,
                       const std::optional<FaultSpec> &fault) {
  const Topology t = build_topology(x_1, x_2, x_inf, fault);

  // Responses to unit excitations; everything else follows by linearity.
  const Vec3 s_i1 = solve_topology(t, 1.0, 0.0, 0.0);
  const Vec3 s_i2 = solve_topology(t, 0.0, 1.0, 0.0);
  const Vec3 s_v = solve_topology(t, 0.0, 0.0, 1.0);

  NetworkCoupling net;
  net.v_inf = v_inf;
  net.x_inf = x_inf;
  net.x_1 = x_1;
  net.x_2 = x_2;
  net.n_1 = n_1;
  net.n_2 = n_2;
  net.fault = fault;

  // Machine current in its own dq components: I_k = (i_2kd + j i_2kq) / n_k.
  auto fill_axis = [&](int bus, NetworkCoupling::AxisCoeffs &dc,
                       NetworkCoupling::AxisCoeffs &qc) {
    const Cx a1 = s_i1(bus);
    const Cx a2 = s_i2(bus);
    const Cx av = s_v(bus);
    dc.a = a1.real() / n_1;
    dc.b = -a1.imag() / n_1;
    dc.c = a2.real() / n_2;
    dc.d = -a2.imag() / n_2;
    dc.e = av.real();
    qc.a = a1.imag() / n_1;
    qc.b = a1.real() / n_1;
    qc.c = a2.imag() / n_2;
    qc.d = a2.real() / n_2;
    qc.e = av.imag();
  };
  fill_axis(0, net.r1d, net.r1q);
  fill_axis(1, net.r2d, net.r2q);

  // Power absorbed by the grid equivalent at the infinite bus:
  //   p = Re(conj(y_inf (v_A - V)) * V), affine in the injections.
  const Cx w1 = std::conj(t.y_inf * s_i1(2));
  const Cx w2 = std::conj(t.y_inf * s_i2(2));
  net.a_pe = v_inf * w1.real() / n_1;
  net.b_pe = v_inf * w1.imag() / n_1;
  net.c_pe = v_inf * w2.real() / n_2;
  net.d_pe = v_inf * w2.imag() / n_2;
  // The lossless network leaves no current-independent term; assert so the
  // Eq.-(5)-shaped expression is exact.
  const double p_const =
      v_inf * v_inf * std::real(std::conj(t.y_inf * (s_v(2) - 1.0)));
  if (std::abs(p_const) > 1e-12)
    throw SolverFailure("network reduction produced a non-linear power term");

  return net;
}

} // namespace

NetworkCoupling reduce_star_network(double x_1, double x_2, double x_inf,
                                    double v_inf, double n_1, double n_2) {
  return reduce(x_1, x_2, x_inf, v_inf, n_1, n_2, std::nullopt);
}

NetworkCoupling apply_short_circuit(const NetworkCoupling &net, Line line,
                                    double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ConfigError("fault fraction must lie strictly inside (0, 1)");
  if (net.fault)
    throw ConfigError("network already carries a fault");
  return reduce(net.x_1, net.x_2, net.x_inf, net.v_inf, net.n_1, net.n_2,
                FaultSpec{line, fraction});
}

std::pair<double, double> NetworkCoupling::bus_voltage_dq(int machine,
                                                          double i21d,
                                                          double i21q,
                                                          double i22d,
                                                          double i22q) const {
  const AxisCoeffs &dc = (machine == 1) ? r1d : r2d;
  const AxisCoeffs &qc = (machine == 1) ? r1q : r2q;
  const double vd =
      dc.a * i21d + dc.b * i21q + dc.c * i22d + dc.d * i22q + dc.e * v_inf;
  const double vq =
      qc.a * i21d + qc.b * i21q + qc.c * i22d + qc.d * i22q + qc.e * v_inf;
  return {vd, vq};
}

double NetworkCoupling::consistency_residual() const {
  const NetworkCoupling rebuilt =
      reduce(x_1, x_2, x_inf, v_inf, n_1, n_2, fault);
  double r = 0.0;
  auto ax = [&r](const AxisCoeffs &lhs, const AxisCoeffs &rhs) {
    r = std::max({r, std::abs(lhs.a - rhs.a), std::abs(lhs.b - rhs.b),
                  std::abs(lhs.c - rhs.c), std::abs(lhs.d - rhs.d),
                  std::abs(lhs.e - rhs.e)});
  };
  ax(r1d, rebuilt.r1d);
  ax(r1q, rebuilt.r1q);
  ax(r2d, rebuilt.r2d);
  ax(r2q, rebuilt.r2q);
  r = std::max({r, std::abs(a_pe - rebuilt.a_pe), std::abs(b_pe - rebuilt.b_pe),
                std::abs(c_pe - rebuilt.c_pe), std::abs(d_pe - rebuilt.d_pe)});
  return r;
}

NodalSolution solve_nodal(const NetworkCoupling &net, double i21d, double i21q,
                          double i22d, double i22q) {
  const Topology t = build_topology(net.x_1, net.x_2, net.x_inf, net.fault);
  const Cx i1 = Cx(i21d, i21q) / net.n_1;
  const Cx i2 = Cx(i22d, i22q) / net.n_2;
  const Vec3 v = solve_topology(t, i1, i2, net.v_inf);

  NodalSolution sol;
  sol.v1 = v(0);
  sol.v2 = v(1);
  sol.v_common = v(2);
  const Cx i_into_b = (v(2) - net.v_inf) * t.y_inf;
  sol.p_injected = std::real(Cx(net.v_inf, 0.0) * std::conj(i_into_b));
  return sol;
}

} // namespace ppm::plant
