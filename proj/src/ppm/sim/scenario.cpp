// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/sim/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "ppm/common/errors.hpp"

namespace ppm::sim {

void Scenario::validate() const {
  if (dt <= 0.0)
    throw ConfigError("scenario dt must be > 0");
  if (duration <= 0.0)
    throw ConfigError("scenario duration must be > 0");
  if (record_stride < 1)
    throw ConfigError("record stride must be >= 1");

  double prev = 0.0;
  for (const Event &e : events) {
    if (e.t < 0.0 || e.t > duration)
      throw EventOutOfRange("event at t=" + std::to_string(e.t) +
                            " lies outside [0, duration]");
    if (e.t < prev)
      throw EventOutOfRange("events must be sorted by time");
    prev = e.t;
    const double k = std::round(e.t / dt);
    if (std::abs(e.t - k * dt) > 0.5 * dt)
      throw EventOutOfRange("event time does not align with the step grid");
    if (e.kind == EventKind::ShortCircuit) {
      if (!(e.fraction > 0.0 && e.fraction < 1.0))
        throw ConfigError("fault fraction must lie in (0, 1)");
      if (e.t_clear <= e.t || e.t_clear > duration)
        throw EventOutOfRange("fault clearing time must follow the fault "
                              "inside the scenario window");
    }
  }
}

int TimeSeries::index_of(const std::string &name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end())
    throw MissingChannel("no channel named " + name);
  return static_cast<int>(it - names.begin());
}

const std::vector<double> &TimeSeries::channel(const std::string &name) const {
  return columns[static_cast<size_t>(index_of(name))];
}

} // namespace ppm::sim
