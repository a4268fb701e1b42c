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

#include "chebqls/blockenc_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "chebqls/approx_family.hpp"

namespace chebqls {
namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr int kMaxSystem = 16;
constexpr int kMaxTerms = 128;

double unitary_error(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

// Above kDenseCheckDim the full U^H U product dominates the run time, so
// unitarity is probed on fixed Gaussian vectors instead.
constexpr Eigen::Index kDenseCheckDim = 128;

double probed_unitary_error(const CMatrix& u) {
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> g;
  double err = 0.0;
  for (int k = 0; k < 2; ++k) {
    CVector v(u.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {g(rng), g(rng)};
    v.normalize();
    const CVector uv = u * v;
    const CVector back = u.adjoint() * uv;
    err = std::max(err, (back - v).cwiseAbs().maxCoeff());
  }
  return err;
}

void require_unitary(const CMatrix& u, const char* what) {
  const double err = u.rows() > kDenseCheckDim ? probed_unitary_error(u) : unitary_error(u);
  if (!(err <= kUnitaryTol))
    throw std::runtime_error(std::string(what) + " is not unitary (error " + std::to_string(err) + ")");
}

void check_encoding(const BlockEncoding& be) {
  if (be.n < 1 || be.ancillas < 1) throw std::invalid_argument("block-encoding has no system or ancilla");
  const Eigen::Index dim = static_cast<Eigen::Index>(be.n) << be.ancillas;
  if (be.unitary.rows() != dim || be.unitary.cols() != dim)
    throw std::invalid_argument("block-encoding unitary has dimension " + std::to_string(be.unitary.rows()) +
                                ", expected " + std::to_string(dim));
}

// e^{i phi R} is diagonal: e^{i phi} on the first n coordinates, e^{-i phi} elsewhere.
void scale_rows(CMatrix& m, double phi, int n) {
  const std::complex<double> in = std::polar(1.0, phi), out = std::conj(in);
  m.topRows(n) *= in;
  m.bottomRows(m.rows() - n) *= out;
}

CMatrix reflect_rows(CMatrix m, int n) {
  m.bottomRows(m.rows() - n) *= -1.0;
  return m;
}

// Householder reflection V, as sign * (I - tau w w^T), whose first column is v.
struct Reflection {
  Eigen::VectorXd w;
  double tau = 0.0;
  double sign = 1.0;

  explicit Reflection(const Eigen::VectorXd& v) {
    // v_0 > 0: V = -(I - 2 w w^T / |w|^2), w = e_0 + v; else V = I - ..., w = e_0 - v.
    w = v;
    if (v(0) > 0.0) {
      w(0) += 1.0;
      sign = -1.0;
    } else {
      w = -w;
      w(0) += 1.0;
    }
    const double ww = w.squaredNorm();
    tau = ww > 0.0 ? 2.0 / ww : 0.0;
  }

  double entry(Eigen::Index i, Eigen::Index j) const { return sign * ((i == j ? 1.0 : 0.0) - tau * w(i) * w(j)); }
};

struct LcuPlan {
  int terms = 0;
  int counter_qubits = 0;
  int branches = 0;
  double norm1 = 0.0;
  Reflection right, left;
};

LcuPlan plan_lcu(const BlockEncoding& be, const ChebSeries& c) {
  check_encoding(be);
  if (be.ancillas != 1) throw std::invalid_argument("lcu_apply needs a single-ancilla block-encoding");
  if (be.n > kMaxSystem) throw std::invalid_argument("system dimension above " + std::to_string(kMaxSystem));
  if (c.parity != Parity::odd) throw std::invalid_argument("lcu_apply needs an odd series");
  const int t = static_cast<int>(c.size());
  if (t < 1 || t > kMaxTerms) throw std::invalid_argument("series length must be in [1, " + std::to_string(kMaxTerms) + "]");
  const double norm1 = c.coeff_norm();
  if (!(norm1 > 0.0) || !std::isfinite(norm1)) throw std::invalid_argument("zero or non-finite coefficient vector");

  const int qubits = static_cast<int>(std::bit_width(static_cast<unsigned>(t - 1))) + 1;
  const int branches = 1 << qubits;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(branches), l = Eigen::VectorXd::Zero(branches);
  for (int i = 0; i < t; ++i) {
    r(i) = std::sqrt(std::abs(c.coeffs[i]) / norm1);
    l(i) = c.coeffs[i] < 0.0 ? -r(i) : r(i);
  }
  return LcuPlan{t, qubits, branches, norm1, Reflection(r), Reflection(l)};
}

// Physical controlled-query count of the counter circuit: controlled W^(2^j)
// costs 2^(j+1) queries, then one U_A.
long lcu_controlled_calls(int qubits) { return 2L * ((1L << qubits) - 1) + 1; }

}  // namespace

double BlockEncoding::unitarity_error() const { return unitary_error(unitary); }

BlockEncoding dilate(const DenseHermitian& a) {
  const int n = a.n();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix());
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double norm = lam.cwiseAbs().maxCoeff();
  if (norm > 1.0 + 1e-12) throw std::invalid_argument("dilate: ||A|| = " + std::to_string(norm) + " exceeds 1");
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = std::sqrt(std::clamp(1.0 - lam(i) * lam(i), 0.0, 1.0));
  CMatrix root = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
  root = 0.5 * (root + root.adjoint()).eval();

  BlockEncoding be;
  be.n = n;
  be.ancillas = 1;
  be.mu = 1.0;
  be.query_count = 1;
  be.controlled_calls = 0;
  be.unitary.resize(2 * n, 2 * n);
  be.unitary.topLeftCorner(n, n) = a.matrix();
  be.unitary.topRightCorner(n, n) = root;
  be.unitary.bottomLeftCorner(n, n) = root;
  be.unitary.bottomRightCorner(n, n) = -a.matrix();
  require_unitary(be.unitary, "dilation");
  return be;
}

CMatrix w_operator(const BlockEncoding& be) {
  check_encoding(be);
  // R U^H R U, applying each R as a row sign flip.
  const CMatrix w = reflect_rows(be.unitary.adjoint() * reflect_rows(be.unitary, be.n), be.n);
  require_unitary(w, "W");
  return w;
}

BlockEncoding chebyshev_block(const BlockEncoding& be, int t) {
  check_encoding(be);
  if (t < 1 || t % 2 == 0) throw std::invalid_argument("chebyshev_block needs an odd degree t >= 1");
  const CMatrix w = w_operator(be);
  // W^k by repeated squaring.
  CMatrix acc = be.unitary, pw = w;
  for (int k = (t - 1) / 2; k > 0; k >>= 1) {
    if (k & 1) acc = acc * pw;
    if (k > 1) pw = pw * pw;
  }
  BlockEncoding out = be;
  out.unitary = std::move(acc);
  out.mu = 1.0;
  out.query_count = be.query_count * t;
  out.controlled_calls = 0;
  require_unitary(out.unitary, "Chebyshev block");
  return out;
}

std::vector<double> chebyshev_phases(int t) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  std::vector<double> phi(t, std::numbers::pi / 2.0);
  phi[0] = (1.0 - t) * std::numbers::pi / 2.0;
  return phi;
}

CMatrix qsvt_sequence(const BlockEncoding& be, const std::vector<double>& phases) {
  check_encoding(be);
  if (phases.empty()) throw std::invalid_argument("qsvt_sequence needs at least one phase");
  const int n = be.n;
  const Eigen::Index dim = be.unitary.rows();
  const CMatrix u = be.unitary;
  const CMatrix uh = u.adjoint();

  auto sequence = [&](double sign) {
    const std::size_t d = phases.size();
    CMatrix m = CMatrix::Identity(dim, dim);
    // Accumulate left to right: m <- m e^{i p R} X with X in {U, U^H}.
    auto step = [&](double phi, const CMatrix& x) {
      CMatrix e = x;
      scale_rows(e, sign * phi, n);
      m = m * e;
    };
    std::size_t j = 0;
    if (d % 2 == 1) step(phases[j++], u);
    while (j < d) {
      step(phases[j], uh);
      step(phases[j + 1], u);
      j += 2;
    }
    return m;
  };
  const CMatrix plus = sequence(1.0), minus = sequence(-1.0);
  return 0.5 * (plus.topLeftCorner(n, n) + minus.topLeftCorner(n, n));
}

BlockEncoding lcu_apply(const BlockEncoding& be, const ChebSeries& c) {
  const LcuPlan plan = plan_lcu(be, c);
  const Eigen::Index m = be.unitary.rows();
  const Eigen::Index dim = plan.branches * m;
  if (dim > kMaxCircuitDim)
    throw std::length_error("LCU circuit dimension " + std::to_string(dim) + " exceeds " + std::to_string(kMaxCircuitDim));

  // Branch unitaries B_i = U_A W^i assembled from controlled W^(2^j): the
  // power applied on branch i is the product of W^(2^j) over the set bits of i.
  const CMatrix w = w_operator(be);
  std::vector<CMatrix> pow2{w};
  for (int j = 1; j < plan.counter_qubits; ++j) pow2.push_back(pow2.back() * pow2.back());
  std::vector<CMatrix> wpow(plan.branches);
  wpow[0] = CMatrix::Identity(m, m);
  for (int i = 1; i < plan.branches; ++i) {
    const int low = std::countr_zero(static_cast<unsigned>(i));
    wpow[i] = wpow[i & (i - 1)] * pow2[low];
  }
  std::vector<CMatrix> branch(plan.branches);
  for (int i = 0; i < plan.branches; ++i) branch[i] = be.unitary * wpow[i];
  wpow.clear();

  // U = (V_L^T (x) I) SELECT (V_R (x) I). Block (r, s) is
  //   sum_i V_L[i][r] V_R[i][s] B_i = s_L (X_rs - tau_L w_r sum_i w_i X_is),
  // X_is = V_R[i][s] B_i, which costs O(K^2 m^2) instead of a dense K^3 product.
  const Reflection& vl = plan.left;
  const Reflection& vr = plan.right;
  BlockEncoding out;
  out.n = be.n;
  out.ancillas = be.ancillas + plan.counter_qubits;
  out.mu = plan.norm1;
  out.query_count = 2L * plan.terms - 1;
  out.controlled_calls = lcu_controlled_calls(plan.counter_qubits);
  out.unitary.resize(dim, dim);
  CMatrix z(m, m);
  for (int s = 0; s < plan.branches; ++s) {
    z.setZero();
    for (int i = 0; i < plan.branches; ++i) {
      const double coef = vl.w(i) * vr.entry(i, s);
      if (coef != 0.0) z += coef * branch[i];
    }
    for (int r = 0; r < plan.branches; ++r) {
      const double a = vr.entry(r, s), b = vl.tau * vl.w(r);
      out.unitary.block(r * m, s * m, m, m) = vl.sign * (a * branch[r] - b * z);
    }
  }
  require_unitary(out.unitary, "LCU circuit");
  return out;
}

CVector lcu_apply_state(const BlockEncoding& be, const ChebSeries& c, const CVector& b) {
  const LcuPlan plan = plan_lcu(be, c);
  if (b.size() != be.n) throw std::invalid_argument("input state has the wrong dimension");
  const Eigen::Index m = be.unitary.rows();
  const CMatrix w = w_operator(be);

  // Column (counter 0, ancilla 0) of the circuit applied to b: only the
  // vectors B_i b need propagating.
  CVector v = CVector::Zero(m);
  v.head(be.n) = b;
  std::vector<CVector> branch(plan.branches);
  for (int i = 0; i < plan.branches; ++i) {
    branch[i] = be.unitary * v;
    if (i + 1 < plan.branches) v = w * v;
  }
  const Reflection& vl = plan.left;
  const Reflection& vr = plan.right;
  CVector z = CVector::Zero(m);
  for (int i = 0; i < plan.branches; ++i) z += (vl.w(i) * vr.entry(i, 0)) * branch[i];
  CVector out(plan.branches * m);
  for (int r = 0; r < plan.branches; ++r)
    out.segment(r * m, m) = vl.sign * (vr.entry(r, 0) * branch[r] - (vl.tau * vl.w(r)) * z);
  return out;
}

QlsOutput solve_qls(const BlockEncoding& be, const CVector& b, int t, double kappa) {
  check_encoding(be);
  if (std::abs(b.norm() - 1.0) > 1e-10) throw std::invalid_argument("b must be a unit vector");
  const ChebSeries c = chebiter_coeffs(t, kappa);
  QlsOutput out;
  out.state = lcu_apply_state(be, c, b);
  out.mu = c.coeff_norm();
  out.query_count = 2L * t - 1;
  const CVector branch = out.state.head(be.n);
  out.alpha = branch.norm();
  if (out.alpha == 0.0) {
    out.x = CVector::Zero(be.n);
    out.residual = b.norm();
    return out;
  }
  out.x = branch / out.alpha;
  const CVector ax = be.encoded() * out.x;
  const double axn = ax.norm();
  out.residual = axn > 0.0 ? (ax / axn - b).norm() : b.norm();
  return out;
}

}  // namespace chebqls
