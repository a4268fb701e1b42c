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

#include "chebqls/iterative_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "chebqls/cheb_core.hpp"

namespace chebqls {
namespace {

void check_rhs(const DenseHermitian& a, const CVector& b, int t) {
  if (b.size() != a.n()) throw std::invalid_argument("right-hand side has the wrong dimension");
  if (t < 1) throw std::invalid_argument("t must be >= 1");
}

void record(IterateTrace& trace, const CMatrix& a, const CVector& b, CVector x) {
  const double r = (a * x - b).norm();
  trace.residual_norms.push_back(r);
  trace.iterates.push_back(std::move(x));
  if (!std::isfinite(r) || r > 10.0 * trace.residual_norms.front()) trace.diverged = true;
}

std::complex<double> parse_complex(const std::string& tok) {
  // Split `re+imj` at the last sign that does not belong to an exponent.
  std::string s = tok;
  if (s.empty()) throw std::invalid_argument("empty matrix entry");
  if (s.back() != 'j' && s.back() != 'i') return {std::stod(s), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  std::size_t used = 0;
  if (split == std::string::npos) {
    const double im = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad matrix entry '" + tok + "'");
    return {0.0, im};
  }
  const std::string re_s = s.substr(0, split), im_s = s.substr(split);
  const double re = std::stod(re_s, &used);
  if (used != re_s.size()) throw std::invalid_argument("bad matrix entry '" + tok + "'");
  const double im = std::stod(im_s, &used);
  if (used != im_s.size()) throw std::invalid_argument("bad matrix entry '" + tok + "'");
  return {re, im};
}

}  // namespace

DenseHermitian::DenseHermitian(CMatrix m, double kappa) : m_(std::move(m)), kappa_(kappa) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw std::invalid_argument("matrix must be square and non-empty");
  if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  const double err = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (err > 1e-12) throw std::invalid_argument("matrix is not Hermitian (max |A - A^H| = " + std::to_string(err) + ")");
}

DenseHermitian DenseHermitian::random(const std::vector<double>& spectrum, std::uint64_t seed) {
  const int n = static_cast<int>(spectrum.size());
  if (n == 0) throw std::invalid_argument("empty spectrum");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = {g(rng), g(rng)};
  const CMatrix q = z.householderQr().householderQ();
  Eigen::VectorXd d(n);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < n; ++i) {
    d(i) = spectrum[i];
    if (spectrum[i] != 0.0) {
      lo = std::min(lo, std::abs(spectrum[i]));
      hi = std::max(hi, std::abs(spectrum[i]));
    }
  }
  CMatrix m = q * d.asDiagonal() * q.adjoint();
  m = 0.5 * (m + m.adjoint()).eval();
  return DenseHermitian(std::move(m), hi > 0.0 ? hi / lo : 1.0);
}

DenseHermitian DenseHermitian::random_indefinite(int n, double kappa, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(1.0 / kappa, 1.0);
  std::vector<double> spec(n);
  for (int i = 0; i < n; ++i) spec[i] = (i % 2 ? -1.0 : 1.0) * u(rng);
  spec[0] = 1.0 / kappa;
  if (n > 1) spec[1] = -1.0;
  return random(spec, rng());
}

CMatrix read_matrix(std::istream& in) {
  long n = 0;
  if (!(in >> n) || n <= 0) throw std::invalid_argument("matrix file: expected a positive dimension on the first line");
  CMatrix m(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      std::string tok;
      if (!(in >> tok)) throw std::invalid_argument("matrix file: expected " + std::to_string(n * n) + " entries");
      m(i, j) = parse_complex(tok);
    }
  }
  return m;
}

void write_matrix(std::ostream& out, const CMatrix& m) {
  out << m.rows() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double im = m(i, j).imag();
      out << (j ? " " : "") << m(i, j).real() << (std::signbit(im) ? '-' : '+') << std::abs(im) << 'j';
    }
    out << '\n';
  }
}

IterateTrace gradient_descent(const DenseHermitian& a, const CVector& b, int t, double eta) {
  check_rhs(a, b, t);
  const CMatrix& m = a.matrix();
  IterateTrace trace;
  CVector x = b;
  record(trace, m, b, x);
  for (int k = 2; k <= t; ++k) {
    x = x - eta * (m * x - b);
    record(trace, m, b, x);
    if (!std::isfinite(trace.residual_norms.back())) break;
  }
  return trace;
}

IterateTrace chebyshev_iteration(const DenseHermitian& a, const CVector& b, int t, double kappa) {
  check_rhs(a, b, t);
  if (!(kappa > 1.0)) throw std::invalid_argument("kappa must be > 1");
  const CMatrix& m = a.matrix();
  const double gamma = (kappa + 1.0) / (kappa - 1.0);
  const double drive = 4.0 * kappa / (kappa - 1.0);
  IterateTrace trace;
  CVector prev = CVector::Zero(b.size());
  CVector cur = (2.0 * kappa / (kappa + 1.0)) * b;
  record(trace, m, b, cur);
  // rho_k = T_k(g) / T_{k+1}(g) from rho_k = 1 / (2g - rho_{k-1}); the ratio
  // form never touches the exponentially growing T_k(g) themselves.
  double rho_prev = 1.0 / gamma;
  for (int k = 1; k < t; ++k) {
    const double rho = 1.0 / (2.0 * gamma - rho_prev);
    const CVector s_cur = ((kappa + 1.0) * cur - 2.0 * kappa * (m * cur)) / (kappa - 1.0);
    CVector next = 2.0 * rho * s_cur - (rho_prev * rho) * prev + (drive * rho) * b;
    prev = std::move(cur);
    cur = std::move(next);
    rho_prev = rho;
    record(trace, m, b, cur);
  }
  return trace;
}

CVector general_solve(const DenseHermitian& a, const CVector& b, int t, double kappa) {
  check_rhs(a, b, t);
  if (!(kappa > 1.0)) throw std::invalid_argument("kappa must be > 1");
  const CMatrix& m = a.matrix();
  CMatrix sq = m * m;
  sq = 0.5 * (sq + sq.adjoint()).eval();
  const DenseHermitian a2(std::move(sq), kappa * kappa);
  return chebyshev_iteration(a2, m * b, t, kappa * kappa).final_iterate();
}

double momentum_block_norm(double eta, double beta, double lambda) {
  Eigen::Matrix2d blk;
  blk << 1.0 + beta - eta * lambda, -beta, 1.0, 0.0;
  return Eigen::JacobiSVD<Eigen::Matrix2d>(blk).singularValues()(0);
}

double momentum_matrix_norm(double kappa, const std::vector<double>& lambda_grid) {
  if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  const double eta = 4.0 / std::pow(1.0 + std::sqrt(1.0 / kappa), 2);
  const double beta = std::pow(1.0 - 2.0 / (1.0 + std::sqrt(kappa)), 2);
  double best = 0.0;
  for (double l : lambda_grid) best = std::max(best, momentum_block_norm(eta, beta, l));
  return best;
}

double qtplus_blowup_log(int t, double kappa) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (!(kappa > 1.0)) throw std::invalid_argument("kappa must be > 1");
  // q_t^+(-1) = r(-1) - 1 with r(-1) = T_t(s(-1)) / T_t(s(0)) > 1, where
  // s(-1) - 1 = 2 (kappa + 1) / (kappa - 1) and s(0) - 1 = 2 / (kappa - 1).
  const double d = cheb_eval_log_excess(t, 2.0 * (kappa + 1.0) / (kappa - 1.0)) -
                   cheb_eval_log_excess(t, 2.0 / (kappa - 1.0));
  const double value = d + std::log(-std::expm1(-d));
  const double floor = t * std::log(1.5) - std::log(2.0);
  if (value < floor) throw std::logic_error("qtplus_blowup: |q_t^+(-1)| below 1/2 (3/2)^t");
  return value;
}

double qtplus_blowup(int t, double kappa) { return std::exp(qtplus_blowup_log(t, kappa)); }

}  // namespace chebqls
