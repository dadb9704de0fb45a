// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_HINF_SDP_HPP
#define PPM_HINF_SDP_HPP

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace ppm::hinf {

/// One affine matrix-inequality block: F0 + sum_i y(vars[i]) * coeffs[i] < 0.
/// Coefficient matrices are symmetric; only the listed variables enter.
struct MatrixInequality {
  Eigen::MatrixXd f0;
  std::vector<int> vars;
  std::vector<Eigen::MatrixXd> coeffs;

  int size() const { return static_cast<int>(f0.rows()); }
};

/// minimize cost . y  subject to every block being negative definite.
struct SdpProblem {
  int num_vars = 0;
  Eigen::VectorXd cost;
  std::vector<MatrixInequality> blocks;
};

struct SdpOptions {
  double rel_gap = 1e-6;   // stop when barrier gap < rel_gap * |cost| + abs_gap
  double abs_gap = 1e-9;
  double mu_shrink = 0.1;  // geometric barrier-parameter schedule
  int max_newton = 2000;   // total Newton step budget
  int max_stage_newton = 60;
  bool verbose = false;
};

struct SdpResult {
  Eigen::VectorXd y;
  double cost = 0.0;
  bool converged = false;
  int newton_steps = 0;
  std::string message;
};

/// Log-det barrier path-following over the strictly feasible set.
class SdpSolver {
public:
  SdpSolver(SdpProblem problem, SdpOptions options = {});

  /// Is y strictly inside every block?
  bool strictly_feasible(const Eigen::VectorXd &y) const;

  /// Phase I: minimize the uniform eigenvalue shift t with M(y) - t I < 0,
  /// starting from an arbitrary y0. Returns a strictly feasible point as
  /// soon as t drops below `stop_below` (or nullopt when the minimized
  /// shift stays above it).
  std::optional<Eigen::VectorXd> find_feasible(const Eigen::VectorXd &y0,
                                               double stop_below = 0.0,
                                               int *steps = nullptr) const;

  /// Phase II: minimize the cost from a strictly feasible start.
  SdpResult minimize(const Eigen::VectorXd &y_start) const;

  const SdpProblem &problem() const { return prob_; }

private:
  SdpProblem prob_;
  SdpOptions opts_;
};

/// Max eigenvalue of the stacked blocks at y (signed infeasibility measure).
double max_block_eigenvalue(const SdpProblem &prob, const Eigen::VectorXd &y);

} // namespace ppm::hinf

#endif
