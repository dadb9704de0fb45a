// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_HINF_NORM_HPP
#define PPM_HINF_NORM_HPP

#include <Eigen/Dense>

namespace ppm::hinf {

/// G(s) = C (sI - A)^-1 B + D.
struct StateSpace {
  Eigen::MatrixXd a, b, c, d;
};

double spectral_abscissa(const Eigen::MatrixXd &a);
bool is_hurwitz(const Eigen::MatrixXd &a, double margin = 0.0);

/// Largest singular value of G(j omega).
double sigma_max(const StateSpace &sys, double omega);

/// H-infinity norm by imaginary-axis eigenvalues of the Hamiltonian pencil
/// (quadratically convergent level iteration), seeded and cross-checked by
/// a frequency grid. Relative accuracy `tol`. Throws UnstableSystem.
double hinf_norm(const StateSpace &sys, double tol = 1e-8);

/// Dense log-grid + golden-section refinement; independent slow path used
/// as a fallback and as the test oracle.
double hinf_norm_grid(const StateSpace &sys, int points = 2000);

} // namespace ppm::hinf

#endif
