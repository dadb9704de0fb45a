// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_SIM_SCENARIO_HPP
#define PPM_SIM_SCENARIO_HPP

#include <string>
#include <vector>

#include "ppm/plant/equilibrium.hpp"
#include "ppm/plant/network.hpp"

namespace ppm::sim {

enum class EventKind { ReferenceStep, LoadStep, ShortCircuit, RestoreLoad };

enum class RefChannel { Q1, P1, VDC1, Q2, P2, VDC2 };

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::ReferenceStep;

  RefChannel channel = RefChannel::Q1; // ReferenceStep: absolute target
  double value = 0.0;

  double delta_pu = 0.0; // LoadStep

  plant::Line line = plant::Line::X1; // ShortCircuit
  double fraction = 0.5;
  double t_clear = 0.0;
};

enum class ControllerKind { Coordinated, Vector, OpenLoop };

struct ServiceToggles {
  bool droop = false;
  bool inertia = false;
  bool pitch_deload = false;
  bool aero_coupling = true;
};

struct Scenario {
  std::string name = "scenario";
  double duration = 10.0;
  double dt = 5e-5;
  int record_stride = 20;
  ControllerKind controller = ControllerKind::Coordinated;
  ServiceToggles services;
  double wind_speed = 9.8185; // [m/s]
  plant::Setpoints setpoints;
  std::vector<Event> events;

  /// Sorted events inside [0, duration], positive dt, aligned event times.
  void validate() const;
};

/// Recorded channels, one column per named signal, shared time vector.
struct TimeSeries {
  std::vector<std::string> names;
  std::vector<double> time;
  std::vector<std::vector<double>> columns; // columns[channel][sample]
  int stride = 1;

  int index_of(const std::string &name) const; // throws MissingChannel
  const std::vector<double> &channel(const std::string &name) const;
};

} // namespace ppm::sim

#endif
