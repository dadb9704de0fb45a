// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_PLANT_JACOBIANS_HPP
#define PPM_PLANT_JACOBIANS_HPP

#include <Eigen/Dense>

#include "ppm/plant/dynamics.hpp"

namespace ppm::plant {

/// Exact Jacobians of the model at a point: the dynamics are polynomial
/// (bilinear couplings only), so these are closed-form.
struct Jacobians {
  Eigen::MatrixXd a;  // 21 x 21, d f / d x
  Eigen::MatrixXd b1; // 21 x 8,  d f / d u
  Eigen::MatrixXd b2; // 21 x 3,  d f / d w
  Eigen::MatrixXd c;  // 6 x 21,  d y / d x
};

Jacobians compute_jacobians(const PlantState &x, const ControlInput &u,
                            const DisturbanceInput &w, const PlantParams &p);

} // namespace ppm::plant

#endif
