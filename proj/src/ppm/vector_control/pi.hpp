// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_VECTOR_CONTROL_PI_HPP
#define PPM_VECTOR_CONTROL_PI_HPP

namespace ppm::vector_control {

struct PiGains {
  double k_p = 1.0;
  double t_i = 1.0; // integral time [s]
};

/// Discrete PI, u = K_p e + (K_p/T_i) * integral(e), trapezoidal integral,
/// output clamp with conditional-integration anti-windup.
class PiController {
public:
  PiController() = default;
  PiController(PiGains gains, double out_min, double out_max,
               bool anti_windup = true);

  double step(double error, double dt);

  /// Sets the integral so an all-zero error step returns exactly `output`.
  void preload_output(double output);

  double integral() const { return integral_; }
  void reset();

private:
  PiGains gains_;
  double out_min_ = -1e300, out_max_ = 1e300;
  bool anti_windup_ = true;
  double integral_ = 0.0;
  double prev_error_ = 0.0;
  bool primed_ = false;
};

} // namespace ppm::vector_control

#endif
