// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/control/extended.hpp"

#include "ppm/common/errors.hpp"

namespace ppm::control {

ExtendedSystem build_extended(const LinearPlant &lin, const WeightFilter &w3) {
  const int n_x = static_cast<int>(lin.a.rows());
  const int n_u = static_cast<int>(lin.b1.cols());
  const int n_w = static_cast<int>(lin.b2.cols());
  const int n_y = static_cast<int>(lin.c.rows());
  const int n_f = w3.state_dim();
  if (lin.a.cols() != n_x || lin.b1.rows() != n_x || lin.b2.rows() != n_x ||
      lin.c.cols() != n_x)
    throw DimensionMismatch("linear plant blocks are inconsistent");
  if (w3.c_q.cols() != n_y || w3.b_w3.cols() != w3.c_q.rows())
    throw DimensionMismatch("weight filter does not match the plant outputs");

  const int n_int = n_y;
  const int n = n_x + n_f + n_int;
  const int n_zf = static_cast<int>(w3.c_w3.rows());
  const int n_z = n_y + n_zf;

  ExtendedSystem e;
  e.n_x = n_x;
  e.n_w3 = n_f;
  e.n_int = n_int;

  e.a_e = Eigen::MatrixXd::Zero(n, n);
  e.a_e.topLeftCorner(n_x, n_x) = lin.a;
  e.a_e.block(n_x, 0, n_f, n_x) = w3.b_w3 * w3.c_q * lin.c;
  e.a_e.block(n_x, n_x, n_f, n_f) = w3.a_w3;
  e.a_e.block(n_x + n_f, 0, n_int, n_x) = -lin.c;

  e.b1_e = Eigen::MatrixXd::Zero(n, n_u);
  e.b1_e.topRows(n_x) = lin.b1;

  e.b2_e = Eigen::MatrixXd::Zero(n, n_w + n_y);
  e.b2_e.topLeftCorner(n_x, n_w) = lin.b2;
  e.b2_e.block(n_x + n_f, n_w, n_int, n_y) =
      Eigen::MatrixXd::Identity(n_int, n_y);

  e.c_e = Eigen::MatrixXd::Zero(n_z, n);
  e.c_e.block(0, 0, n_y, n_x) = -lin.c;
  e.c_e.block(n_y, 0, n_zf, n_x) = w3.d_w3 * w3.c_q * lin.c;
  e.c_e.block(n_y, n_x, n_zf, n_f) = w3.c_w3;

  e.d1_e = Eigen::MatrixXd::Zero(n_z, n_u);
  e.d1_e.block(0, n_u - n_y, n_y, n_y) = Eigen::MatrixXd::Identity(n_y, n_y);

  return e;
}

namespace {
int svd_rank(const Eigen::MatrixXcd &m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto &s = svd.singularValues();
  if (s.size() == 0)
    return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0))
      ++r;
  return r;
}
} // namespace

bool integrator_subspace_controllable(const ExtendedSystem &ext, double tol) {
  const int n = ext.dim();
  Eigen::MatrixXcd m(n, n + ext.b1_e.cols());
  m << ext.a_e.cast<std::complex<double>>(),
      ext.b1_e.cast<std::complex<double>>();
  return svd_rank(m, tol) == n;
}

bool stabilizable(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b,
                  double margin, double tol) {
  const int n = static_cast<int>(a.rows());
  Eigen::EigenSolver<Eigen::MatrixXd> eig(a);
  for (int k = 0; k < n; ++k) {
    const std::complex<double> lambda = eig.eigenvalues()(k);
    if (lambda.real() < -margin)
      continue;
    Eigen::MatrixXcd m(n, n + b.cols());
    m << a.cast<std::complex<double>>() -
             lambda * Eigen::MatrixXcd::Identity(n, n),
        b.cast<std::complex<double>>();
    if (svd_rank(m, tol) < n)
      return false;
  }
  return true;
}

} // namespace ppm::control
