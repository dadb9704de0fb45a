// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/services/deload.hpp"

#include <cmath>

#include "ppm/common/errors.hpp"

namespace ppm::services {

namespace {

// Golden-section maximization of f over [lo, hi].
template <typename F>
std::pair<double, double> golden_max(F f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-12 * std::max(1.0, std::abs(b))) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

// Bisection for f(x) = target with f(lo) and f(hi) bracketing it.
template <typename F>
double bisect_to(F f, double lo, double hi, double target) {
  double flo = f(lo) - target;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid) - target;
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14 * std::max(1.0, std::abs(hi)))
      break;
  }
  return 0.5 * (lo + hi);
}

} // namespace

DeloadPoint deload_point(const TurbineAeroModel &aero, double v_w,
                         double deload_fraction) {
  if (!(deload_fraction > 0.0 && deload_fraction < 0.5))
    throw ConfigError("deload fraction must lie in (0, 0.5)");
  if (v_w <= 0.0)
    throw NoDeloadSolution("wind speed must be positive");

  DeloadPoint pt;
  pt.v_w = v_w;

  // MPPT point within the speed band: coarse grid then golden refinement
  auto p_of_omega = [&](double om) { return aero.mech_power(v_w, om, 0.0); };
  constexpr int kGrid = 240;
  double best_om = aero.omega_min, best_p = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double om = aero.omega_min +
                      (aero.omega_max - aero.omega_min) * i / kGrid;
    const double p = p_of_omega(om);
    if (p > best_p) {
      best_p = p;
      best_om = om;
    }
  }
  const double span = (aero.omega_max - aero.omega_min) / kGrid;
  const auto [om_opt, p_opt] =
      golden_max(p_of_omega, std::max(aero.omega_min, best_om - span),
                 std::min(aero.omega_max, best_om + span));
  pt.omega_opt = om_opt;
  pt.p_m_opt = p_opt;
  if (p_opt <= 1e-9)
    throw NoDeloadSolution("no usable power at this wind speed");

  const double target = (1.0 - deload_fraction) * p_opt;
  pt.p_m_del = target;

  // over-speed branch: P is decreasing right of the optimum
  if (p_of_omega(aero.omega_max) <= target &&
      pt.omega_opt < aero.omega_max - 1e-9) {
    pt.omega_del = bisect_to(p_of_omega, pt.omega_opt, aero.omega_max, target);
    pt.speed_branch_ok = pt.omega_del > pt.omega_opt;
  }

  // pitch branch: feather at the optimal speed until the target is met
  auto p_of_beta = [&](double b) {
    return aero.mech_power(v_w, pt.omega_opt, b);
  };
  if (p_of_beta(aero.beta_max) <= target) {
    pt.beta_del = bisect_to(p_of_beta, 0.0, aero.beta_max, target);
    pt.pitch_branch_ok = true;
  }

  if (!pt.speed_branch_ok && !pt.pitch_branch_ok)
    throw NoDeloadSolution("neither deloading branch solves at " +
                           std::to_string(v_w) + " m/s");
  return pt;
}

DeloadCurve build_deload_curve(const TurbineAeroModel &aero, double v_lo,
                               double v_hi, int samples,
                               double deload_fraction) {
  if (!(v_lo > 0.0) || !(v_hi > v_lo) || samples < 2)
    throw ConfigError("deload curve needs a positive, ordered wind range");
  DeloadCurve curve;
  curve.deload_fraction = deload_fraction;
  curve.points.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double v = v_lo + (v_hi - v_lo) * i / (samples - 1);
    try {
      curve.points.push_back(deload_point(aero, v, deload_fraction));
    } catch (const NoDeloadSolution &) {
      DeloadPoint flagged;
      flagged.v_w = v;
      curve.points.push_back(flagged); // kept, both branches flagged false
    }
  }
  return curve;
}

} // namespace ppm::services
