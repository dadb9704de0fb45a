// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_CONTROL_EXTENDED_HPP
#define PPM_CONTROL_EXTENDED_HPP

#include "ppm/control/linearize.hpp"
#include "ppm/control/weights.hpp"

namespace ppm::control {

/// Mixed-sensitivity synthesis model. State is [x; x_w3; int_e] where
/// int_e integrates (y_ref - y); disturbance channel is [w; y_ref].
///
///   A_e  = [ A            0     0 ]    B1_e = [ B1 ]   B2_e = [ B2  0 ]
///          [ Bw3*Cq*C   Aw3     0 ]           [  0 ]          [ 0   0 ]
///          [ -C            0    0 ]           [  0 ]          [ 0   I ]
///
///   C_e  = [ -C            0    0 ]    D1_e = [ 0  I ]
///          [ Dw3*Cq*C   Cw3     0 ]           [ 0  0 ]
///
/// D1_e is the feedthrough entering the synthesis output via the feedback
/// (its 8 columns act on U); the performance output therefore reads
/// z = C_e x_e + D1_e u, and the design transfer is taken from [w; y_ref].
struct ExtendedSystem {
  Eigen::MatrixXd a_e;  // n_ext x n_ext
  Eigen::MatrixXd b1_e; // n_ext x 8  (control)
  Eigen::MatrixXd b2_e; // n_ext x 9  (disturbance [w; y_ref])
  Eigen::MatrixXd c_e;  // 8 x n_ext  (performance output [e; y_w3])
  Eigen::MatrixXd d1_e; // 8 x 8

  int n_x = 0;
  int n_w3 = 0;
  int n_int = 0;

  int dim() const { return n_x + n_w3 + n_int; }
};

ExtendedSystem build_extended(const LinearPlant &lin, const WeightFilter &w3);

/// PBH test at lambda = 0: with a stable weight filter this is exactly
/// reachability of the integrator subspace. Synthesis refuses models that
/// fail it.
bool integrator_subspace_controllable(const ExtendedSystem &ext,
                                      double tol = 1e-9);

/// PBH stabilizability scan over all eigenvalues with Re >= -margin.
bool stabilizable(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b,
                  double margin = 1e-9, double tol = 1e-9);

} // namespace ppm::control

#endif
