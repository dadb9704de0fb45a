// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/hinf/synthesis.hpp"

#include <cmath>

#include "ppm/common/errors.hpp"

namespace ppm::hinf {

namespace {

// Variable layout: svec(X_P) first (diagonal then upper triangle row-wise),
// then W_P row-major, then optionally gamma.
struct VarLayout {
  int n = 0;   // extended state dim
  int m = 0;   // inputs
  int n_xp = 0;
  int n_wp = 0;
  bool has_gamma = false;

  int total() const { return n_xp + n_wp + (has_gamma ? 1 : 0); }
  int xp(int i, int j) const { // i <= j
    return i * n - i * (i - 1) / 2 + (j - i);
  }
  int wp(int r, int s) const { return n_xp + r * n + s; }
  int gamma() const { return n_xp + n_wp; }
};

VarLayout layout_for(int n, int m, bool has_gamma) {
  VarLayout l;
  l.n = n;
  l.m = m;
  l.n_xp = n * (n + 1) / 2;
  l.n_wp = m * n;
  l.has_gamma = has_gamma;
  return l;
}

Eigen::MatrixXd sym_basis(int n, int i, int j) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  e(i, j) = 1.0;
  e(j, i) = 1.0;
  if (i == j)
    e(i, j) = 1.0;
  return e;
}

Eigen::MatrixXd unpack_xp(const VarLayout &l, const Eigen::VectorXd &y) {
  Eigen::MatrixXd x(l.n, l.n);
  for (int i = 0; i < l.n; ++i)
    for (int j = i; j < l.n; ++j) {
      x(i, j) = y(l.xp(i, j));
      x(j, i) = x(i, j);
    }
  return x;
}

Eigen::MatrixXd unpack_wp(const VarLayout &l, const Eigen::VectorXd &y) {
  Eigen::MatrixXd w(l.m, l.n);
  for (int r = 0; r < l.m; ++r)
    for (int s = 0; s < l.n; ++s)
      w(r, s) = y(l.wp(r, s));
  return w;
}

void pack(const VarLayout &l, const Eigen::MatrixXd &xp,
          const Eigen::MatrixXd &wp, double gamma, Eigen::VectorXd &y) {
  y.setZero(l.total());
  for (int i = 0; i < l.n; ++i)
    for (int j = i; j < l.n; ++j)
      y(l.xp(i, j)) = xp(i, j);
  for (int r = 0; r < l.m; ++r)
    for (int s = 0; s < l.n; ++s)
      y(l.wp(r, s)) = wp(r, s);
  if (l.has_gamma)
    y(l.gamma()) = gamma;
}

// The 3x3-block synthesis LMI with Psi = (A Xp + B1 Wp) + (.)^T in the
// (1,1) block, B2 constant off-diagonal, and (C Xp + D1 Wp)^T coupling the
// performance rows. `k_fixed` (optional) substitutes Wp = K Xp.
MatrixInequality big_lmi(const control::ExtendedSystem &ext,
                         const VarLayout &l, bool gamma_as_variable,
                         double fixed_gamma, double margin,
                         const Eigen::MatrixXd *k_fixed) {
  const int n = ext.dim();
  const int nw = static_cast<int>(ext.b2_e.cols());
  const int nz = static_cast<int>(ext.c_e.rows());
  const int big = n + nw + nz;

  MatrixInequality blk;
  blk.f0 = Eigen::MatrixXd::Zero(big, big);
  blk.f0.block(0, n, n, nw) = ext.b2_e;
  blk.f0.block(n, 0, nw, n) = ext.b2_e.transpose();
  blk.f0 += margin * Eigen::MatrixXd::Identity(big, big);
  if (!gamma_as_variable) {
    blk.f0.block(n, n, nw, nw) -=
        fixed_gamma * Eigen::MatrixXd::Identity(nw, nw);
    blk.f0.block(n + nw, n + nw, nz, nz) -=
        fixed_gamma * Eigen::MatrixXd::Identity(nz, nz);
  }

  auto add_xp_coeff = [&](int i, int j) {
    const Eigen::MatrixXd s = sym_basis(n, i, j);
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(big, big);
    Eigen::MatrixXd as = ext.a_e * s;
    Eigen::MatrixXd cs = ext.c_e * s;
    if (k_fixed) {
      as += ext.b1_e * (*k_fixed) * s;
      cs += ext.d1_e * (*k_fixed) * s;
    }
    f.block(0, 0, n, n) = as + as.transpose();
    f.block(n + nw, 0, nz, n) = cs;
    f.block(0, n + nw, n, nz) = cs.transpose();
    blk.vars.push_back(l.xp(i, j));
    blk.coeffs.push_back(std::move(f));
  };
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      add_xp_coeff(i, j);

  if (!k_fixed) {
    for (int r = 0; r < l.m; ++r)
      for (int s = 0; s < n; ++s) {
        Eigen::MatrixXd f = Eigen::MatrixXd::Zero(big, big);
        // E_rs has a single 1; B1*E and D1*E are rank-one columns
        Eigen::MatrixXd be = Eigen::MatrixXd::Zero(n, n);
        be.col(s) = ext.b1_e.col(r);
        f.block(0, 0, n, n) = be;
        f.block(0, 0, n, n) += be.transpose();
        Eigen::MatrixXd de = Eigen::MatrixXd::Zero(nz, n);
        de.col(s) = ext.d1_e.col(r);
        f.block(n + nw, 0, nz, n) = de;
        f.block(0, n + nw, n, nz) = de.transpose();
        blk.vars.push_back(l.wp(r, s));
        blk.coeffs.push_back(std::move(f));
      }
  }

  if (gamma_as_variable) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(big, big);
    f.block(n, n, nw, nw) = -Eigen::MatrixXd::Identity(nw, nw);
    f.block(n + nw, n + nw, nz, nz) = -Eigen::MatrixXd::Identity(nz, nz);
    blk.vars.push_back(l.gamma());
    blk.coeffs.push_back(std::move(f));
  }
  return blk;
}

MatrixInequality xp_floor_lmi(const VarLayout &l, double floor) {
  MatrixInequality blk;
  blk.f0 = floor * Eigen::MatrixXd::Identity(l.n, l.n);
  for (int i = 0; i < l.n; ++i)
    for (int j = i; j < l.n; ++j) {
      blk.vars.push_back(l.xp(i, j));
      blk.coeffs.push_back(-sym_basis(l.n, i, j));
    }
  return blk;
}

} // namespace

Eigen::VectorXd balance_scaling(const control::ExtendedSystem &ext,
                                int sweeps) {
  const int n = ext.dim();
  Eigen::VectorXd t = Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd a = ext.a_e;
  Eigen::MatrixXd b1 = ext.b1_e, b2 = ext.b2_e;
  Eigen::MatrixXd c = ext.c_e;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      double r = b1.row(i).cwiseAbs().sum() + b2.row(i).cwiseAbs().sum();
      double col = c.col(i).cwiseAbs().sum();
      for (int j = 0; j < n; ++j) {
        if (j == i)
          continue;
        r += std::abs(a(i, j));
        col += std::abs(a(j, i));
      }
      if (r <= 0.0 || col <= 0.0)
        continue;
      const double f = std::exp2(std::round(0.5 * std::log2(r / col)));
      if (f == 1.0)
        continue;
      t(i) *= f;
      a.row(i) /= f;
      a.col(i) *= f;
      b1.row(i) /= f;
      b2.row(i) /= f;
      c.col(i) *= f;
    }
  }
  return t;
}

control::ExtendedSystem apply_balancing(const control::ExtendedSystem &ext,
                                        const Eigen::VectorXd &t) {
  control::ExtendedSystem b = ext;
  const Eigen::VectorXd inv = t.cwiseInverse();
  b.a_e = inv.asDiagonal() * ext.a_e * t.asDiagonal();
  b.b1_e = inv.asDiagonal() * ext.b1_e;
  b.b2_e = inv.asDiagonal() * ext.b2_e;
  b.c_e = ext.c_e * t.asDiagonal();
  return b;
}

SdpProblem make_synthesis_sdp(const control::ExtendedSystem &ext,
                              bool gamma_as_variable, double fixed_gamma,
                              double margin, double xp_floor) {
  const VarLayout l = layout_for(ext.dim(),
                                 static_cast<int>(ext.b1_e.cols()),
                                 gamma_as_variable);
  SdpProblem prob;
  prob.num_vars = l.total();
  prob.cost = Eigen::VectorXd::Zero(prob.num_vars);
  if (gamma_as_variable)
    prob.cost(l.gamma()) = 1.0;
  prob.blocks.push_back(
      big_lmi(ext, l, gamma_as_variable, fixed_gamma, margin, nullptr));
  prob.blocks.push_back(xp_floor_lmi(l, xp_floor));
  return prob;
}

SdpProblem make_brl_sdp(const control::ExtendedSystem &ext,
                        const Eigen::MatrixXd &k, double gamma, double margin,
                        double xp_floor) {
  if (k.rows() != ext.b1_e.cols() || k.cols() != ext.dim())
    throw DimensionMismatch("BRL gain has wrong dimensions");
  VarLayout l = layout_for(ext.dim(), static_cast<int>(ext.b1_e.cols()),
                           false);
  l.n_wp = 0; // X_P is the only variable
  SdpProblem prob;
  prob.num_vars = l.total();
  prob.cost = Eigen::VectorXd::Zero(prob.num_vars);
  prob.blocks.push_back(big_lmi(ext, l, false, gamma, margin, &k));
  prob.blocks.push_back(xp_floor_lmi(l, xp_floor));
  return prob;
}

SynthesisResult synthesize(const control::ExtendedSystem &ext,
                           const SynthesisOptions &opts) {
  const int n = ext.dim();
  const int m = static_cast<int>(ext.b1_e.cols());
  if (!control::stabilizable(ext.a_e, ext.b1_e))
    throw Infeasible("extended pair (A, B1) is not stabilizable");
  if (!control::integrator_subspace_controllable(ext))
    throw Infeasible("integrator subspace is unreachable from the inputs");

  const Eigen::VectorXd t = balance_scaling(ext);
  const control::ExtendedSystem bal = apply_balancing(ext, t);

  const VarLayout l = layout_for(n, m, true);
  const SdpProblem prob =
      make_synthesis_sdp(bal, true, 0.0, opts.lmi_margin, opts.xp_floor);
  SdpSolver solver(prob, opts.sdp);

  // phase I from X_P = I, W_P = 0 and a growing gamma guess
  const double scale0 = 1.0 + bal.b2_e.norm() + bal.c_e.norm();
  Eigen::VectorXd y0;
  std::optional<Eigen::VectorXd> feas;
  double gamma0 = 10.0 * scale0;
  for (int attempt = 0; attempt < 5 && !feas; ++attempt, gamma0 *= 100.0) {
    pack(l, Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Zero(m, n),
         gamma0, y0);
    feas = solver.find_feasible(y0);
  }
  if (!feas)
    throw Infeasible("no strictly feasible point found for the synthesis LMI");

  SdpOptions sdp_opts = opts.sdp;
  sdp_opts.rel_gap = 0.2 * opts.gamma_rel_tol;
  SdpSolver tuned(prob, sdp_opts);
  const SdpResult sol = tuned.minimize(*feas);
  if (!sol.converged && sol.cost <= 0.0)
    throw SolverFailure("gamma minimization failed: " + sol.message);

  const Eigen::MatrixXd xp_b = unpack_xp(l, sol.y);
  const Eigen::MatrixXd wp_b = unpack_wp(l, sol.y);
  const double gamma = sol.y(l.gamma());

  Eigen::LLT<Eigen::MatrixXd> llt(xp_b);
  if (llt.info() != Eigen::Success)
    throw SolverFailure("certificate X_P lost positive definiteness");
  const Eigen::MatrixXd k_bal =
      llt.solve(wp_b.transpose()).transpose(); // K = Wp Xp^-1

  SynthesisResult res;
  res.k0 = k_bal * t.cwiseInverse().asDiagonal();
  res.gamma = gamma;
  res.x_p = t.asDiagonal() * xp_b * t.asDiagonal();
  res.w_p = res.k0 * res.x_p;
  res.diag.balance = t;
  res.diag.newton_steps = sol.newton_steps;
  res.diag.solver_status = sol.message;

  // residual of the balanced LMI without the strictness shift
  SdpProblem raw = make_synthesis_sdp(bal, true, 0.0, 0.0, 0.0);
  Eigen::VectorXd y_chk;
  pack(l, xp_b, wp_b, gamma, y_chk);
  // drop the X_P floor block for the residual: only the big LMI matters
  SdpProblem raw_big;
  raw_big.num_vars = raw.num_vars;
  raw_big.cost = raw.cost;
  raw_big.blocks.push_back(raw.blocks.front());
  res.diag.lmi_residual = max_block_eigenvalue(raw_big, y_chk);

  if (opts.crosscheck_bisection)
    res.diag.gamma_bisection = bisect_gamma(ext, opts);
  return res;
}

double bisect_gamma(const control::ExtendedSystem &ext,
                    const SynthesisOptions &opts) {
  const int n = ext.dim();
  const int m = static_cast<int>(ext.b1_e.cols());
  const Eigen::VectorXd t = balance_scaling(ext);
  const control::ExtendedSystem bal = apply_balancing(ext, t);
  const VarLayout l = layout_for(n, m, false);

  Eigen::VectorXd warm;
  pack(l, Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Zero(m, n), 0.0,
       warm);

  auto probe = [&](double gamma, Eigen::VectorXd &start) {
    const SdpProblem prob =
        make_synthesis_sdp(bal, false, gamma, opts.lmi_margin, opts.xp_floor);
    SdpSolver solver(prob, opts.sdp);
    return solver.find_feasible(start);
  };

  // exponential bracket
  double hi = 1.0;
  std::optional<Eigen::VectorXd> hi_point;
  for (int i = 0; i < 40 && !hi_point; ++i, hi *= 4.0) {
    Eigen::VectorXd start = warm;
    hi_point = probe(hi, start);
    if (hi_point)
      break;
  }
  if (!hi_point)
    throw Infeasible("bisection found no feasible gamma");

  double lo = hi;
  for (int i = 0; i < 60; ++i) {
    const double cand = lo / 4.0;
    Eigen::VectorXd start = *hi_point;
    auto p = probe(cand, start);
    if (!p)
      break;
    lo = cand;
    hi = cand;
    hi_point = p;
    if (lo < 1e-9)
      break;
  }
  if (hi == lo)
    lo = hi / 4.0;

  while (hi - lo > 0.25 * opts.gamma_rel_tol * hi) {
    const double mid = 0.5 * (hi + lo);
    Eigen::VectorXd start = *hi_point;
    auto p = probe(mid, start);
    if (p) {
      hi = mid;
      hi_point = p;
    } else {
      lo = mid;
    }
  }
  return hi;
}

StateSpace closed_loop(const control::ExtendedSystem &ext,
                       const Eigen::MatrixXd &k0) {
  if (k0.rows() != ext.b1_e.cols() || k0.cols() != ext.dim())
    throw DimensionMismatch("gain does not match the extended system");
  StateSpace cl;
  cl.a = ext.a_e + ext.b1_e * k0;
  cl.b = ext.b2_e;
  cl.c = ext.c_e + ext.d1_e * k0;
  cl.d = Eigen::MatrixXd::Zero(cl.c.rows(), cl.b.cols());
  return cl;
}

CertificateReport certify(const control::ExtendedSystem &ext,
                          const SynthesisResult &result, double norm_slack) {
  CertificateReport rep;
  rep.gamma = result.gamma;

  const StateSpace cl = closed_loop(ext, result.k0);
  rep.spectral_abscissa = hinf::spectral_abscissa(cl.a);
  rep.hurwitz_ok = rep.spectral_abscissa < 0.0;

  if (rep.hurwitz_ok) {
    rep.hinf = hinf_norm(cl);
    rep.norm_ok = rep.hinf <= result.gamma * (1.0 + norm_slack);
  }

  // balanced-coordinate LMI residual, strictness per the synthesis margin
  const Eigen::VectorXd &t = result.diag.balance;
  const control::ExtendedSystem bal = apply_balancing(ext, t);
  const Eigen::VectorXd inv = t.cwiseInverse();
  const Eigen::MatrixXd xp_b = inv.asDiagonal() * result.x_p * inv.asDiagonal();
  const Eigen::MatrixXd wp_b = result.w_p * inv.asDiagonal();
  const VarLayout l = layout_for(ext.dim(),
                                 static_cast<int>(ext.b1_e.cols()), true);
  SdpProblem raw;
  raw.num_vars = l.total();
  raw.cost = Eigen::VectorXd::Zero(raw.num_vars);
  raw.blocks.push_back(big_lmi(bal, l, true, 0.0, 0.0, nullptr));
  Eigen::VectorXd y;
  pack(l, xp_b, wp_b, result.gamma, y);
  rep.lmi_residual = max_block_eigenvalue(raw, y);
  rep.lmi_ok = rep.lmi_residual < -1e-9;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(result.x_p,
                                                    Eigen::EigenvaluesOnly);
  rep.xp_min_eig = es.eigenvalues().minCoeff();
  rep.xp_ok = rep.xp_min_eig > 0.0;
  return rep;
}

Eigen::VectorXd controller_step(const Eigen::MatrixXd &k0,
                                const Eigen::VectorXd &x_dev,
                                const Eigen::VectorXd &x_filter,
                                const Eigen::VectorXd &int_e) {
  if (x_dev.size() + x_filter.size() + int_e.size() != k0.cols())
    throw DimensionMismatch("controller state partition mismatch");
  Eigen::VectorXd x(k0.cols());
  x << x_dev, x_filter, int_e;
  return k0 * x;
}

} // namespace ppm::hinf
