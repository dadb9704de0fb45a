// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/control/linearize.hpp"

#include "ppm/common/errors.hpp"
#include "ppm/plant/jacobians.hpp"

namespace ppm::control {

LinearPlant linearize(const plant::PlantParams &params,
                      const plant::Equilibrium &op) {
  if (params.gde.secondary_enabled)
    throw ConfigError("synthesis model excludes the secondary integrator");

  plant::PlantParams p = params;
  p.gde.p_m_rest = op.p_m_rest;
  const double res = plant::pmsg_derivatives(op.x, op.u, op.w, p)
                         .to_vector()
                         .lpNorm<Eigen::Infinity>();
  if (res > 1e-8)
    throw NotAnEquilibrium("derivative norm at operating point is " +
                           std::to_string(res));

  const plant::Jacobians j = plant::compute_jacobians(op.x, op.u, op.w, p);
  LinearPlant lin;
  lin.a = j.a;
  lin.b1 = j.b1;
  lin.b2 = j.b2;
  lin.c = j.c;
  lin.operating_point = op;
  if (!lin.a.allFinite() || !lin.b1.allFinite() || !lin.b2.allFinite() ||
      !lin.c.allFinite())
    throw SolverFailure("linearization produced non-finite entries");
  return lin;
}

} // namespace ppm::control
