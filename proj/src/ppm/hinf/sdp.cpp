// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/hinf/sdp.hpp"

#include <cmath>
#include <iostream>
#include <limits>

#include "ppm/common/errors.hpp"

namespace ppm::hinf {

namespace {

Eigen::MatrixXd assemble(const MatrixInequality &blk,
                         const Eigen::VectorXd &y) {
  Eigen::MatrixXd m = blk.f0;
  for (size_t i = 0; i < blk.vars.size(); ++i)
    m.noalias() += y(blk.vars[i]) * blk.coeffs[i];
  return m;
}

// Barrier terms of one block at y: value -logdet(-M), gradient and the
// Gram factor rows (vec of L^-1 F_i L^-T) used for the Hessian GEMM.
struct BlockEval {
  bool feasible = false;
  double value = 0.0;
};

class BarrierEvaluator {
public:
  BarrierEvaluator(const SdpProblem &prob, bool with_derivatives)
      : prob_(prob), with_derivatives_(with_derivatives) {}

  bool eval(const Eigen::VectorXd &y) {
    const int m = prob_.num_vars;
    value_ = 0.0;
    if (with_derivatives_) {
      grad_ = Eigen::VectorXd::Zero(m);
      hess_ = Eigen::MatrixXd::Zero(m, m);
    }
    for (const MatrixInequality &blk : prob_.blocks) {
      const int s = blk.size();
      Eigen::MatrixXd neg = -assemble(blk, y);
      Eigen::LLT<Eigen::MatrixXd> llt(neg);
      if (llt.info() != Eigen::Success)
        return false;
      const Eigen::MatrixXd l = llt.matrixL();
      double logdet = 0.0;
      for (int i = 0; i < s; ++i) {
        if (l(i, i) <= 0.0)
          return false;
        logdet += std::log(l(i, i));
      }
      value_ -= 2.0 * logdet;
      if (!with_derivatives_)
        continue;

      const int k = static_cast<int>(blk.vars.size());
      Eigen::MatrixXd gram(k, s * s);
      for (int i = 0; i < k; ++i) {
        Eigen::MatrixXd g = blk.coeffs[i];
        l.triangularView<Eigen::Lower>().solveInPlace(g);
        Eigen::MatrixXd gt = g.transpose();
        l.triangularView<Eigen::Lower>().solveInPlace(gt);
        grad_(blk.vars[i]) += gt.trace();
        gram.row(i) = Eigen::Map<const Eigen::VectorXd>(gt.data(), s * s);
      }
      Eigen::MatrixXd h_local = gram * gram.transpose();
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          hess_(blk.vars[i], blk.vars[j]) += h_local(i, j);
    }
    return true;
  }

  double value() const { return value_; }
  const Eigen::VectorXd &grad() const { return grad_; }
  const Eigen::MatrixXd &hess() const { return hess_; }

private:
  const SdpProblem &prob_;
  bool with_derivatives_;
  double value_ = 0.0;
  Eigen::VectorXd grad_;
  Eigen::MatrixXd hess_;
};

// Damped Newton descent of  cost.y / mu + barrier(y)  for one stage.
// Returns false when the Newton budget is exhausted.
bool center_stage(const SdpProblem &prob, const Eigen::VectorXd &cost,
                  double mu, Eigen::VectorXd &y, int max_iters, int &steps,
                  double stage_tol) {
  BarrierEvaluator be(prob, true);
  BarrierEvaluator probe(prob, false);
  for (int it = 0; it < max_iters; ++it) {
    if (!be.eval(y))
      throw SolverFailure("barrier stage left the feasible region");
    const Eigen::VectorXd g = cost / mu + be.grad();
    Eigen::MatrixXd h = be.hess();

    // regularized solve; flat directions are harmless for descent
    Eigen::VectorXd dy;
    double reg = 0.0;
    for (int attempt = 0;; ++attempt) {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(
          h + reg * Eigen::MatrixXd::Identity(h.rows(), h.cols()));
      dy = ldlt.solve(-g);
      if (ldlt.info() == Eigen::Success && dy.allFinite() &&
          g.dot(dy) < 0.0)
        break;
      reg = (reg == 0.0) ? 1e-12 * (1.0 + h.diagonal().maxCoeff()) : reg * 100;
      if (attempt > 12)
        throw SolverFailure("Newton system could not be stabilized");
    }

    const double decrement2 = -g.dot(dy);
    if (decrement2 * 0.5 < stage_tol)
      return true;

    const double f0 = cost.dot(y) / mu + be.value();
    double alpha = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
      const Eigen::VectorXd yt = y + alpha * dy;
      if (!probe.eval(yt))
        continue;
      const double ft = cost.dot(yt) / mu + probe.value();
      if (ft <= f0 + 0.25 * alpha * g.dot(dy)) {
        y = yt;
        moved = true;
        break;
      }
    }
    ++steps;
    if (!moved)
      return true; // line search exhausted: numerically centered
  }
  return false;
}

int total_barrier_weight(const SdpProblem &prob) {
  int nu = 0;
  for (const auto &blk : prob.blocks)
    nu += blk.size();
  return nu;
}

} // namespace

SdpSolver::SdpSolver(SdpProblem problem, SdpOptions options)
    : prob_(std::move(problem)), opts_(options) {
  if (prob_.cost.size() != prob_.num_vars)
    throw DimensionMismatch("SDP cost dimension mismatch");
  for (const auto &blk : prob_.blocks) {
    if (blk.vars.size() != blk.coeffs.size())
      throw DimensionMismatch("SDP block var/coeff mismatch");
    for (const auto &f : blk.coeffs)
      if (f.rows() != blk.f0.rows() || f.cols() != blk.f0.cols())
        throw DimensionMismatch("SDP coefficient size mismatch");
  }
}

bool SdpSolver::strictly_feasible(const Eigen::VectorXd &y) const {
  BarrierEvaluator be(prob_, false);
  return be.eval(y);
}

double max_block_eigenvalue(const SdpProblem &prob, const Eigen::VectorXd &y) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto &blk : prob.blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble(blk, y),
                                                      Eigen::EigenvaluesOnly);
    worst = std::max(worst, es.eigenvalues().maxCoeff());
  }
  return worst;
}

std::optional<Eigen::VectorXd>
SdpSolver::find_feasible(const Eigen::VectorXd &y0, double stop_below,
                         int *steps) const {
  // Augment with the uniform shift t: every block gets -t I.
  SdpProblem aug;
  aug.num_vars = prob_.num_vars + 1;
  aug.cost = Eigen::VectorXd::Zero(aug.num_vars);
  aug.cost(prob_.num_vars) = 1.0;
  aug.blocks = prob_.blocks;
  for (auto &blk : aug.blocks) {
    blk.vars.push_back(prob_.num_vars);
    blk.coeffs.push_back(
        -Eigen::MatrixXd::Identity(blk.f0.rows(), blk.f0.cols()));
  }

  Eigen::VectorXd y(aug.num_vars);
  y.head(prob_.num_vars) = y0;
  const double t0 = max_block_eigenvalue(prob_, y0);
  y(prob_.num_vars) = t0 + 1.0 + 0.1 * std::abs(t0);

  const int nu = total_barrier_weight(aug);
  double mu = std::max(1.0, std::abs(y(prob_.num_vars))) / nu;
  int local_steps = 0;
  for (int stage = 0; stage < 60; ++stage) {
    if (!center_stage(aug, aug.cost, mu, y, opts_.max_stage_newton,
                      local_steps, 1e-9))
      break;
    if (steps)
      *steps = local_steps;
    if (y(prob_.num_vars) < stop_below) {
      // strictly feasible for the unshifted problem once t < 0; confirm
      Eigen::VectorXd cand = y.head(prob_.num_vars);
      if (y(prob_.num_vars) < 0.0 && strictly_feasible(cand))
        return cand;
    }
    if (nu * mu < 1e-12 + 1e-9 * std::abs(y(prob_.num_vars)))
      break;
    if (local_steps > opts_.max_newton)
      break;
    mu *= opts_.mu_shrink;
  }
  if (steps)
    *steps = local_steps;
  Eigen::VectorXd cand = y.head(prob_.num_vars);
  if (y(prob_.num_vars) < stop_below && y(prob_.num_vars) < 0.0 &&
      strictly_feasible(cand))
    return cand;
  return std::nullopt;
}

SdpResult SdpSolver::minimize(const Eigen::VectorXd &y_start) const {
  if (!strictly_feasible(y_start))
    throw SolverFailure("SDP minimize requires a strictly feasible start");

  SdpResult res;
  res.y = y_start;
  const int nu = total_barrier_weight(prob_);
  double mu = (1.0 + std::abs(prob_.cost.dot(y_start))) / nu;
  int steps = 0;
  for (int stage = 0; stage < 80; ++stage) {
    if (!center_stage(prob_, prob_.cost, mu, res.y, opts_.max_stage_newton,
                      steps, 1e-10)) {
      res.message = "stage budget exhausted";
      break;
    }
    const double cost = prob_.cost.dot(res.y);
    if (opts_.verbose)
      std::cerr << "sdp: stage " << stage << " mu " << mu << " cost " << cost
                << " steps " << steps << "\n";
    // barrier gap bound: cost - p* <= nu * mu at the stage center
    if (nu * mu < opts_.abs_gap + opts_.rel_gap * std::abs(cost)) {
      res.converged = true;
      break;
    }
    if (steps > opts_.max_newton) {
      res.message = "Newton budget exhausted";
      break;
    }
    mu *= opts_.mu_shrink;
  }
  res.cost = prob_.cost.dot(res.y);
  res.newton_steps = steps;
  if (res.converged)
    res.message = "converged";
  return res;
}

} // namespace ppm::hinf
