// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_HINF_SYNTHESIS_HPP
#define PPM_HINF_SYNTHESIS_HPP

#include <limits>
#include <string>

#include "ppm/control/extended.hpp"
#include "ppm/hinf/norm.hpp"
#include "ppm/hinf/sdp.hpp"

namespace ppm::hinf {

struct SynthesisOptions {
  double gamma_rel_tol = 1e-3; // accuracy demanded of the minimized gamma
  double lmi_margin = 1e-9;    // "< 0" realized as "<= -margin I" (balanced)
  double xp_floor = 1e-6;      // X_P >= floor * I keeps the gain extractable
  bool crosscheck_bisection = false;
  SdpOptions sdp;
};

struct SynthesisResult {
  Eigen::MatrixXd k0;  // 8 x n_ext static gain, original coordinates
  double gamma = 0.0;  // certified disturbance attenuation bound
  Eigen::MatrixXd x_p; // SPD certificate, original coordinates
  Eigen::MatrixXd w_p; // k0 * x_p

  struct Diagnostics {
    Eigen::VectorXd balance; // diagonal similarity applied before the LMI
    double gamma_bisection = std::numeric_limits<double>::quiet_NaN();
    double lmi_residual = 0.0; // max eig of the balanced LMI at the solution
    int newton_steps = 0;
    std::string solver_status;
  } diag;
};

/// Diagonal power-of-two similarity balancing row/column magnitudes of the
/// extended system. Returns the scaling t with x_balanced = x / t.
Eigen::VectorXd balance_scaling(const control::ExtendedSystem &ext,
                                int sweeps = 6);

control::ExtendedSystem apply_balancing(const control::ExtendedSystem &ext,
                                        const Eigen::VectorXd &t);

/// LMI of the synthesis problem over (X_P svec, W_P, [gamma]). When
/// `gamma_as_variable` is false the supplied fixed gamma is folded into the
/// constant block and the last variable disappears.
SdpProblem make_synthesis_sdp(const control::ExtendedSystem &ext,
                              bool gamma_as_variable, double fixed_gamma,
                              double margin, double xp_floor);

/// Bounded-real-lemma feasibility problem for a *fixed* gain: variables are
/// X_P only, with W_P tied to K X_P. Used by the equivalence spot-checks.
SdpProblem make_brl_sdp(const control::ExtendedSystem &ext,
                        const Eigen::MatrixXd &k, double gamma, double margin,
                        double xp_floor);

/// Static state-feedback synthesis by LMI minimization of gamma, on the
/// balanced coordinates, with the gain mapped back afterwards.
SynthesisResult synthesize(const control::ExtendedSystem &ext,
                           const SynthesisOptions &opts = {});

/// gamma-bisection over feasibility-only LMIs (the alternate route).
double bisect_gamma(const control::ExtendedSystem &ext,
                    const SynthesisOptions &opts = {});

/// Closed-loop design transfer (A+B1K, B2, C+D1K, 0).
StateSpace closed_loop(const control::ExtendedSystem &ext,
                       const Eigen::MatrixXd &k0);

struct CertificateReport {
  bool hurwitz_ok = false;
  double spectral_abscissa = 0.0;
  bool norm_ok = false;
  double hinf = 0.0;
  double gamma = 0.0;
  bool lmi_ok = false;
  double lmi_residual = 0.0;
  bool xp_ok = false;
  double xp_min_eig = 0.0;

  bool passed() const { return hurwitz_ok && norm_ok && lmi_ok && xp_ok; }
};

/// Independent certification of a synthesis result (never throws on a bad
/// controller; the report carries the failures).
CertificateReport certify(const control::ExtendedSystem &ext,
                          const SynthesisResult &result,
                          double norm_slack = 1e-6);

/// Multivariable-PI control law: dU = K0 [dx; x_w3; int_e].
Eigen::VectorXd controller_step(const Eigen::MatrixXd &k0,
                                const Eigen::VectorXd &x_dev,
                                const Eigen::VectorXd &x_filter,
                                const Eigen::VectorXd &int_e);

} // namespace ppm::hinf

#endif
