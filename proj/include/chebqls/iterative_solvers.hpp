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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace chebqls {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Dense Hermitian matrix together with a condition-number bound kappa: all
// nonzero eigenvalues are claimed to lie in [-1, -1/kappa] u [1/kappa, 1].
class DenseHermitian {
 public:
  // Throws std::invalid_argument if `m` is not square or not Hermitian to
  // 1e-12 entrywise, or kappa < 1.
  DenseHermitian(CMatrix m, double kappa);

  // Q diag(spectrum) Q^H with Q from the QR factorization of a complex
  // Gaussian matrix drawn from a seeded mt19937_64. kappa is max|l| / min|l|.
  static DenseHermitian random(const std::vector<double>& spectrum, std::uint64_t seed);

  // Indefinite spectrum in D_kappa with both 1/kappa and -1 present, so the
  // bound is tight; the remaining eigenvalues are uniform in magnitude with
  // alternating signs.
  static DenseHermitian random_indefinite(int n, double kappa, std::uint64_t seed);

  int n() const { return static_cast<int>(m_.rows()); }
  double kappa() const { return kappa_; }
  const CMatrix& matrix() const { return m_; }

 private:
  CMatrix m_;
  double kappa_;
};

// Text format: `n` on the first line, then n rows of n entries `re+imj`.
CMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const CMatrix& m);

struct IterateTrace {
  std::vector<CVector> iterates;       // x_1 .. x_t
  std::vector<double> residual_norms;  // ||A x_k - b||
  bool diverged = false;               // a residual exceeded 10x the first one

  const CVector& final_iterate() const { return iterates.back(); }
};

// x_1 = b, x_k = x_{k-1} - eta (A x_{k-1} - b). With eta = 1 the t-th
// iterate is p_t^+(A) b, p_t^+(l) = (1 - (1 - l)^t) / l.
IterateTrace gradient_descent(const DenseHermitian& a, const CVector& b, int t, double eta = 1.0);

// Chebyshev iteration for a matrix with spectrum in [1/kappa, 1]:
//   x_0 = 0, x_1 = (2 kappa / (kappa + 1)) b,
//   x_{k+1} = 2 rho_k S x_k - rho_{k-1} rho_k x_{k-1} + (4 kappa / (kappa - 1)) rho_k b,
// S = ((kappa + 1) I - 2 kappa A) / (kappa - 1), rho_k = T_k(g) / T_{k+1}(g),
// g = (kappa + 1) / (kappa - 1). The t-th iterate is q_t^+(A) b.
IterateTrace chebyshev_iteration(const DenseHermitian& a, const CVector& b, int t, double kappa);

// q_t(A) b for indefinite A with spectrum in D_kappa: Chebyshev iteration on
// A^2 (bound kappa^2) with right-hand side A b.
CVector general_solve(const DenseHermitian& a, const CVector& b, int t, double kappa);

// Spectral norm of the 2x2 momentum block [[1 + beta - eta l, -beta], [1, 0]].
double momentum_block_norm(double eta, double beta, double lambda);

// Largest block norm over `lambda_grid` with eta = 4 / (1 + sqrt(1/kappa))^2
// and beta = (1 - 2 / (1 + sqrt(kappa)))^2.
double momentum_matrix_norm(double kappa, const std::vector<double>& lambda_grid);

// log |q_t^+(-1)| for the positive-definite map on [1/kappa, 1]. Throws
// std::logic_error if it falls below log(1/2 (3/2)^t).
double qtplus_blowup_log(int t, double kappa);
double qtplus_blowup(int t, double kappa);

}  // namespace chebqls
