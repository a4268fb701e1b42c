// Copyright 2026 The chebqls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <random>

#include "chebqls/approx_family.hpp"
#include "chebqls/blockenc_sim.hpp"

using namespace chebqls;

namespace {

CMatrix spectral(const CMatrix& a, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  Eigen::VectorXcd fl(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) fl(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().adjoint();
}

double cheb_trig(int t, double x) { return std::cos(t * std::acos(std::clamp(x, -1.0, 1.0))); }

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

DenseHermitian diag(std::initializer_list<double> d, double kappa) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
  int i = 0;
  for (double x : d) v(i++) = x;
  return DenseHermitian(v.cast<std::complex<double>>().asDiagonal(), kappa);
}

// Random spectrum in D_kappa with both endpoints present.
DenseHermitian random_dk(int n, double kappa, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(1.0 / kappa, 1.0);
  std::vector<double> spec(n);
  for (int i = 0; i < n; ++i) spec[i] = (i % 2 ? -1.0 : 1.0) * u(rng);
  spec[0] = 1.0 / kappa;
  if (n > 1) spec[1] = -1.0;
  return DenseHermitian::random(spec, seed + 1);
}

double off_diagonal(const CMatrix& m) {
  CMatrix o = m;
  o.diagonal().setZero();
  return max_abs(o);
}

}  // namespace

TEST_CASE("dilation") {
  const BlockEncoding id = dilate(DenseHermitian(CMatrix::Identity(3, 3), 1.0));
  CMatrix expect = CMatrix::Identity(6, 6);
  expect.bottomRightCorner(3, 3) *= -1.0;
  CHECK(max_abs(id.unitary - expect) == 0.0);

  const BlockEncoding zero = dilate(DenseHermitian(CMatrix::Zero(2, 2), 1.0));
  CMatrix swap = CMatrix::Zero(4, 4);
  swap.topRightCorner(2, 2).setIdentity();
  swap.bottomLeftCorner(2, 2).setIdentity();
  CHECK(max_abs(zero.unitary - swap) <= 1e-15);

  const DenseHermitian a = DenseHermitian::random({0.9, -0.4, 0.05, -1.0}, 5);
  const BlockEncoding be = dilate(a);
  CHECK(be.unitarity_error() <= 1e-12);
  CHECK(max_abs(be.encoded() - a.matrix()) <= 1e-12);
  CHECK(be.ancillas == 1);
  CHECK(be.unitary.rows() == 8);

  CHECK_THROWS_AS(dilate(diag({1.5, 0.2}, 7.5)), std::invalid_argument);
}

TEST_CASE("W operator") {
  const BlockEncoding id = dilate(DenseHermitian(CMatrix::Identity(2, 2), 1.0));
  CHECK(max_abs(w_operator(id) - CMatrix::Identity(4, 4)) <= 1e-15);
  const BlockEncoding zero = dilate(DenseHermitian(CMatrix::Zero(2, 2), 1.0));
  CHECK(max_abs(w_operator(zero) + CMatrix::Identity(4, 4)) <= 1e-15);
  const CMatrix w = w_operator(dilate(DenseHermitian::random({0.3, -0.8, 0.6}, 2)));
  CHECK(max_abs(w.adjoint() * w - CMatrix::Identity(6, 6)) <= 1e-12);
}

TEST_CASE("Chebyshev block in W form") {
  const BlockEncoding d = dilate(diag({0.6, 0.2}, 3.0));
  CHECK(max_abs(chebyshev_block(d, 1).top_left() - d.top_left()) <= 1e-15);
  const BlockEncoding b3 = chebyshev_block(d, 3);
  CHECK(std::abs(b3.top_left()(0, 0) - (-0.936)) <= 1e-14);
  CHECK(std::abs(b3.top_left()(1, 1) - (4 * 0.008 - 0.6)) <= 1e-14);
  CHECK(off_diagonal(b3.top_left()) <= 1e-15);
  CHECK(b3.query_count == 3);

  const DenseHermitian a = DenseHermitian::random({0.7, -0.25, 0.95, -0.5}, 9);
  const BlockEncoding be = dilate(a);
  for (int t : {7, 21, 51}) {
    const BlockEncoding bt = chebyshev_block(be, t);
    CHECK(max_abs(bt.top_left() - spectral(a.matrix(), [t](double x) { return cheb_trig(t, x); })) <= 1e-9);
    CHECK(bt.unitarity_error() <= 1e-10);
    CHECK(bt.query_count == t);
  }
  CHECK_THROWS_AS(chebyshev_block(be, 4), std::invalid_argument);
  CHECK_THROWS_AS(chebyshev_block(be, 0), std::invalid_argument);
}

TEST_CASE("QSVT sequence") {
  const DenseHermitian a = DenseHermitian::random({0.35, -0.9, 0.1}, 17);
  const BlockEncoding be = dilate(a);
  CHECK(max_abs(qsvt_sequence(be, chebyshev_phases(1)) - a.matrix()) <= 1e-14);
  CHECK(max_abs(qsvt_sequence(be, chebyshev_phases(3)) - chebyshev_block(be, 3).top_left()) <= 1e-10);
  CHECK(max_abs(qsvt_sequence(be, std::vector<double>(5, 0.0)) - a.matrix()) <= 1e-12);
  for (int t : {2, 4, 10}) {
    // Even lengths reproduce T_t(A) as well.
    CHECK(max_abs(qsvt_sequence(be, chebyshev_phases(t)) - spectral(a.matrix(), [t](double x) { return cheb_trig(t, x); })) <= 1e-10);
  }
  for (int t = 1; t <= 51; t += 2) {
    CHECK(max_abs(qsvt_sequence(be, chebyshev_phases(t)) - chebyshev_block(be, t).top_left()) <= 1e-9);
  }
  CHECK(chebyshev_phases(5)[0] == doctest::Approx(-2.0 * std::numbers::pi));
}

TEST_CASE("LCU block-encoding") {
  const DenseHermitian a = DenseHermitian::random({0.45, -0.8, 0.2, 1.0}, 23);
  const BlockEncoding be = dilate(a);

  const BlockEncoding one = lcu_apply(be, ChebSeries({1.0}, Parity::odd));
  CHECK(one.mu == 1.0);
  CHECK(max_abs(one.top_left() - a.matrix()) <= 1e-12);

  const BlockEncoding diff = lcu_apply(be, ChebSeries({0.5, -0.5}, Parity::odd));
  CHECK(diff.mu == 1.0);
  const CMatrix want = spectral(a.matrix(), [](double x) { return 0.5 * (x - cheb_trig(3, x)); });
  CHECK(max_abs(diff.top_left() - want) <= 1e-12);
  CHECK(diff.unitarity_error() <= 1e-10);

  const DenseHermitian d = diag({0.5, 0.9}, 2.0);
  const ChebSeries c = chebiter_coeffs(4, 2.0);
  const BlockEncoding q4 = lcu_apply(dilate(d), c);
  CHECK(q4.mu == doctest::Approx(c.coeff_norm()).epsilon(1e-15));
  CHECK(std::abs(q4.top_left()(0, 0) - qt_eval(4, 2.0, 0.5) / c.coeff_norm()) <= 1e-9);
  CHECK(std::abs(q4.top_left()(1, 1) - qt_eval(4, 2.0, 0.9) / c.coeff_norm()) <= 1e-9);
  CHECK(off_diagonal(q4.top_left()) <= 1e-10);
  CHECK(q4.query_count == 7);
  // 3 counter qubits: controlled W, W^2, W^4, then U_A.
  CHECK(q4.ancillas == 4);
  CHECK(q4.controlled_calls == 15);

  CHECK_THROWS_AS(lcu_apply(be, ChebSeries({0.0, 0.0}, Parity::odd)), std::invalid_argument);
  CHECK_THROWS_AS(lcu_apply(be, ChebSeries({1.0}, Parity::even)), std::invalid_argument);
}

TEST_CASE("LCU q_t against spectral evaluation and the state path") {
  for (double kappa : {3.0, 8.0}) {
    const DenseHermitian a = random_dk(5, kappa, 31);
    const BlockEncoding be = dilate(a);
    for (int t : {1, 5, 16}) {
      const ChebSeries c = chebiter_coeffs(t, kappa);
      const BlockEncoding lcu = lcu_apply(be, c);
      const CMatrix want = spectral(a.matrix(), [&](double x) { return qt_eval(t, kappa, x); }) / c.coeff_norm();
      CHECK(max_abs(lcu.top_left() - want) <= 1e-9);
      CHECK(lcu.unitarity_error() <= 1e-10);
      CHECK(lcu.query_count == 2 * t - 1);

      CVector b = CVector::Random(5);
      b.normalize();
      const CVector full = lcu.unitary.leftCols(5) * b;
      CHECK((lcu_apply_state(be, c, b) - full).norm() <= 1e-12);
    }
  }
}

TEST_CASE("solve_qls") {
  CVector b = CVector::Random(3);
  b.normalize();
  const BlockEncoding id = dilate(DenseHermitian(CMatrix::Identity(3, 3), 1.0));
  for (int t : {1, 4, 9}) {
    const QlsOutput out = solve_qls(id, b, t, 2.0);
    CHECK(out.residual <= 1e-9);
    CHECK((out.x - b).norm() <= 1e-9);
    CHECK(out.alpha == doctest::Approx(qt_eval(t, 2.0, 1.0) / out.mu).epsilon(1e-12));
    CHECK(std::abs(out.state.norm() - 1.0) <= 1e-10);
    CHECK(out.query_count == 2 * t - 1);
  }

  const double kappa = 4.0, eps = 1e-6;
  const int t = static_cast<int>(std::ceil(0.5 * kappa * std::log(2.0 * kappa * kappa / eps)));
  CVector b2(2);
  b2 << std::complex<double>(0.6, 0.0), std::complex<double>(0.0, 0.8);
  const QlsOutput out = solve_qls(dilate(diag({1.0, 1.0 / kappa}, kappa)), b2, t, kappa);
  CHECK(out.residual <= 2.0 * eps);
  // Flag-0 branch is q_t(A) b / ||c||_1.
  CHECK(std::abs(out.alpha * out.x(0) - qt_eval(t, kappa, 1.0) * b2(0) / out.mu) <= 1e-12);
  CHECK(std::abs(out.alpha * out.x(1) - qt_eval(t, kappa, 0.25) * b2(1) / out.mu) <= 1e-12);

  CHECK_THROWS_AS(solve_qls(id, 2.0 * b, 3, 2.0), std::invalid_argument);
}

TEST_CASE("diagonal inputs give diagonal blocks") {
  const DenseHermitian d = diag({0.3, -0.7, 1.0, -0.15}, 1.0 / 0.15);
  const BlockEncoding be = dilate(d);
  CHECK(off_diagonal(chebyshev_block(be, 9).top_left()) <= 1e-10);
  CHECK(off_diagonal(qsvt_sequence(be, chebyshev_phases(9))) <= 1e-10);
  CHECK(off_diagonal(lcu_apply(be, chebiter_coeffs(6, 1.0 / 0.15)).top_left()) <= 1e-10);
}

TEST_CASE("LCU at dimension 1024") {
  const double kappa = 6.0;
  const DenseHermitian a = random_dk(8, kappa, 17);
  const BlockEncoding be = dilate(a);
  const ChebSeries c = chebiter_coeffs(17, kappa);
  const BlockEncoding l = lcu_apply(be, c);
  REQUIRE(l.unitary.rows() == 1024);
  CHECK(l.unitarity_error() <= 1e-10);
  const CMatrix want = spectral(a.matrix(), [&](double x) { return qt_eval(17, kappa, x); });
  CHECK((l.encoded() - want).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(l.query_count == 33);
}
