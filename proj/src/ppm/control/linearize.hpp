// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_CONTROL_LINEARIZE_HPP
#define PPM_CONTROL_LINEARIZE_HPP

#include <Eigen/Dense>

#include "ppm/plant/equilibrium.hpp"

namespace ppm::control {

/// Linear small-signal model about an operating point:
///   dx = A x + B1 u + B2 w,  y = C x   (all deviations)
struct LinearPlant {
  Eigen::MatrixXd a;  // 21 x 21
  Eigen::MatrixXd b1; // 21 x 8
  Eigen::MatrixXd b2; // 21 x 3
  Eigen::MatrixXd c;  // 6 x 21
  plant::Equilibrium operating_point;
};

/// Analytic linearization. Throws NotAnEquilibrium when the supplied point
/// does not zero the derivative map.
LinearPlant linearize(const plant::PlantParams &params,
                      const plant::Equilibrium &op);

} // namespace ppm::control

#endif
