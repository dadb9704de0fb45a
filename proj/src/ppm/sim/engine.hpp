// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_SIM_ENGINE_HPP
#define PPM_SIM_ENGINE_HPP

#include <Eigen/Dense>

#include <optional>

#include "ppm/control/weights.hpp"
#include "ppm/plant/dynamics.hpp"
#include "ppm/plant/equilibrium.hpp"
#include "ppm/services/aero.hpp"
#include "ppm/services/deload.hpp"
#include "ppm/services/droop.hpp"
#include "ppm/services/inertia.hpp"
#include "ppm/sim/scenario.hpp"
#include "ppm/vector_control/converter_control.hpp"

namespace ppm::sim {

/// Everything the engine needs besides the scenario script.
struct ModelBundle {
  plant::PlantParams params;
  services::TurbineAeroModel aero;
  services::DroopConfig droop;
  services::InertiaConfig inertia;
  vector_control::VectorControlConfig vector_control;
  double deload_fraction = 0.10;
};

/// Synthesized coordinated controller as loaded from a controller file.
struct ControllerBundle {
  Eigen::MatrixXd k0;
  control::WeightFilter w3;
  plant::Equilibrium op;
  double gamma = 0.0;
};

struct RunLog {
  long saturation_steps = 0;
  double first_saturation_time = -1.0;
  double equilibrium_residual = 0.0;
};

struct RunResult {
  TimeSeries ts;
  RunLog log;
  plant::PlantState final_state;
  Eigen::VectorXd final_full_state; // incl. controller/service states
  plant::Equilibrium equilibrium;
};

/// Deterministic fixed-step 4th-order integration of the closed loop with
/// timed events. The coordinated controller and the frequency services run
/// as continuous dynamics inside the derivative; the vector baseline steps
/// its discrete PI cascades once per step.
RunResult run(const Scenario &scenario, const ModelBundle &model,
              const ControllerBundle *coordinated);

} // namespace ppm::sim

#endif
