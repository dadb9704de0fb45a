// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_CONTROL_WEIGHTS_HPP
#define PPM_CONTROL_WEIGHTS_HPP

#include <Eigen/Dense>

namespace ppm::control {

/// High-frequency emphasis weight applied to the two reactive-power
/// channels. Per channel a cascade of `order` first-order sections
///   w(s) = g^(1/order) * (s + z) / (s + p),  z = omega_c/3, p = 40*omega_c,
/// so the magnitude rises by 20 dB/decade per section above the corner and
/// levels off beyond p (kept low enough for fixed-step simulation).
struct WeightFilter {
  Eigen::MatrixXd a_w3, b_w3, c_w3, d_w3; // state space of the weight
  Eigen::MatrixXd c_q;                    // 2 x 6 selector picking Q1, Q2
  int order = 1;
  double corner_hz = 50.0;
  double gain = 1.0; // magnitude at the corner frequency

  int state_dim() const { return static_cast<int>(a_w3.rows()); }

  /// |W(j omega)| of one channel (all channels are identical).
  double magnitude(double omega) const;
};

WeightFilter make_rolloff_filter(double corner_hz, int order,
                                 double gain = 1.0);

} // namespace ppm::control

#endif
