// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/vector_control/pi.hpp"

#include <algorithm>

#include "ppm/common/errors.hpp"

namespace ppm::vector_control {

PiController::PiController(PiGains gains, double out_min, double out_max,
                           bool anti_windup)
    : gains_(gains), out_min_(out_min), out_max_(out_max),
      anti_windup_(anti_windup) {
  if (gains.t_i <= 0.0)
    throw ConfigError("PI integral time must be > 0");
  if (out_min > out_max)
    throw ConfigError("PI output limits are inverted");
}

void PiController::reset() {
  integral_ = 0.0;
  prev_error_ = 0.0;
  primed_ = false;
}

void PiController::preload_output(double output) {
  integral_ = output * gains_.t_i / gains_.k_p;
  prev_error_ = 0.0;
  primed_ = true;
}

double PiController::step(double error, double dt) {
  if (!primed_) {
    prev_error_ = error;
    primed_ = true;
  }
  const double candidate =
      integral_ + 0.5 * dt * (error + prev_error_);
  const double u_raw =
      gains_.k_p * error + (gains_.k_p / gains_.t_i) * candidate;
  const double u = std::clamp(u_raw, out_min_, out_max_);

  // conditional integration: freeze while pushing further into a limit
  const bool saturated_high = u_raw > out_max_ && error > 0.0;
  const bool saturated_low = u_raw < out_min_ && error < 0.0;
  if (!anti_windup_ || (!saturated_high && !saturated_low))
    integral_ = candidate;
  prev_error_ = error;
  return u;
}

} // namespace ppm::vector_control
