// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/plant/params.hpp"

#include "ppm/common/errors.hpp"

namespace ppm::plant {

namespace {
void require(bool ok, const std::string &what) {
  if (!ok)
    throw ConfigError("parameter validation failed: " + what);
}
} // namespace

void BaseQuantities::validate() const {
  require(omega_fb > 0.0, "omega_fb > 0");
  require(omega_b > 0.0, "omega_b > 0");
  require(s_base > 0.0, "s_base > 0");
}

void PmsgParams::validate() const {
  require(r_1f > 0.0 && r_2f > 0.0 && r_s > 0.0, "resistances > 0");
  require(l_1f > 0.0 && l_2f > 0.0 && l_s > 0.0, "inductances > 0");
  require(c_f > 0.0 && c_dc > 0.0, "capacitances > 0");
  require(h_t > 0.0, "h_t > 0");
  require(pole_pairs > 0, "pole_pairs > 0");
  require(n_tr > 0.0, "n_tr > 0");
  require(tau_c > 0.0, "tau_c > 0");
  require(beta_min < beta_max, "beta_min < beta_max");
  require(dbeta_min < 0.0 && dbeta_max > 0.0, "dbeta_min < 0 < dbeta_max");
}

void GridEquivalentParams::validate() const {
  require(h > 0.0, "gde h > 0");
  require(d_u >= 0.0, "gde d_u >= 0");
  require(p_l0 >= 0.0, "gde p_l0 >= 0");
}

} // namespace ppm::plant
