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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chebqls/cheb_core.hpp"

namespace chebqls {

// Odd polynomial approximations of 1/x on D_kappa = [-1, -1/kappa] u [1/kappa, 1].
//   gradient_descent:    p_t(x) = (1 - (1 - x^2)^t) / x
//   cks_truncated:       p_t with its Chebyshev expansion cut at a tail index
//   chebyshev_iteration: q_t(x) = (1 - T_t(s(x^2)) / T_t(s(0))) / x,
//                        s(y) = (1 + 1/kappa^2 - 2y) / (1 - 1/kappa^2)
// All three have degree 2t - 1 before truncation.
enum class Family { gradient_descent, cks_truncated, chebyshev_iteration };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

struct InverseApproxSpec {
  Family family = Family::chebyshev_iteration;
  double kappa = 2.0;
  int t = 1;
  std::optional<double> epsilon;

  // Throws std::invalid_argument on kappa <= 1, t < 1, or a truncated family
  // without epsilon.
  void validate() const;
  ChebSeries build() const;
};

struct ErrorReport {
  double residual_notion2 = 0.0;  // max over D_kappa of |x p(x) - 1|
  double error_notion1 = 0.0;     // max over D_kappa of |p(x) - 1/x|
  double supnorm_full = 0.0;      // max over [-1, 1] of |p(x)|
  double coeff_norm = 0.0;        // sum |c_i|
};

// Which error notion min_degree targets.
enum class ErrorNotion { inverse, residual };

enum class DegreeMode {
  formula,   // 2 ceil(bound) - 1 from the analytic degree bounds
  measured,  // smallest degree whose grid-measured error is <= epsilon
  table,     // the published comparison table convention (see README)
};

ChebSeries gd_poly(int t);

// Truncation index J = ceil(sqrt(t ln(4t / eps))) used for the CKS series.
int cks_cutoff(int t, double epsilon);

// Drops every coefficient of `s` (a gd_poly(t) series) past cks_cutoff(t,
// eps). Throws std::logic_error if the dropped 1-norm exceeds eps.
ChebSeries cks_truncate(const ChebSeries& s, int t, double epsilon);

// -- Chebyshev-iteration polynomials --------------------------------------

// Positive-definite form on [1/c, 1]: r_t^+(y) = T_t(s_c(y)) / T_t(s_c(0))
// with s_c(y) = (c + 1 - 2cy) / (c - 1), and q_t^+(y) = (1 - r_t^+(y)) / y.
// q_t(x) = x q_t^+(x^2) with c = kappa^2. Valid for any real y; evaluated in
// the log domain wherever T_t would overflow.
double qt_plus_residual(int t, double c, double y);
double qt_plus_eval(int t, double c, double y);

// log T_t(s_c(0)) with s_c(0) = 1 + 2 / (c - 1).
double log_cheb_at_s0(int t, double c);

// q_t(x) and its residual 1 - x q_t(x) = T_t(s(x^2)) / T_t(s(0)).
double qt_eval(int t, double kappa, double x);
double qt_residual(int t, double kappa, double x);

// The same residual from its root factorization
//   prod_k (1 - x^2 / y_k),  y_k = ((1 + 1/kappa^2) - (1 - 1/kappa^2) cos theta_k) / 2,
// theta_k = (k - 1/2) pi / t. Keeps full relative accuracy on D_kappa even
// when the residual is far below double precision epsilon.
double qt_residual_product(int t, double kappa, double x);

enum class CoeffPath { fast, recurrence };

// Chebyshev expansion of q_t. The fast path samples q_t at ChebNodes(M),
// M = bit_ceil(2t), and interpolates in O(t log t); the recurrence path runs
// the three-term Chebyshev-iteration recurrence on coefficient vectors in
// O(t^2).
ChebSeries chebiter_coeffs(int t, double kappa, CoeffPath path = CoeffPath::fast);

// Runs the coefficient recurrence once up to t_max and calls `visit(t, c_t)`
// for every t = 1..t_max. Stops early if `visit` returns false.
void chebiter_sweep(int t_max, double kappa,
                    const std::function<bool(int, const ChebSeries&)>& visit);

// -- error measurement -----------------------------------------------------

// Both error notions on D_kappa (Chebyshev-distributed points on [1/kappa, 1]
// and its mirror) plus the sup-norm on [-1, 1]. grid <= 0 selects
// default_grid_size(degree) points per interval.
ErrorReport residual_error(const ChebSeries& s, double kappa, int grid = 0);

// Degree 2t - 1 (2J + 1 for truncated CKS) reaching error epsilon.
int min_degree(Family family, double kappa, double epsilon, DegreeMode mode,
               ErrorNotion notion = ErrorNotion::residual);

struct NormBound {
  double coeff_norm = 0.0;
  double bound = 0.0;  // 2 (1 + 1 / T_t(s(0))) t
};

// Throws std::logic_error if the coefficient norm exceeds the bound.
NormBound supnorm_bound(int t, double kappa);

struct OptimalityReport {
  int t = 0;
  double kappa = 0.0;
  double closed_form = 0.0;       // 1 / T_t(s(0))
  double identity_error = 0.0;    // max |(1 - x q_t(x)) - T_t(s(x^2)) / T_t(s(0))|
  double max_residual = 0.0;      // measured max over [1/kappa, 1]
  int alternation_points = 0;     // extrema with |r| >= (1 - 1e-6) max and alternating sign
  double lp_optimum = 0.0;        // discrete minimax value over odd degree-(2t-1) polynomials
  double lp_challenger = 0.0;     // LP minimizer's residual measured on a dense grid
  bool lp_resolvable = true;      // closed_form large enough for a double-precision LP
  bool identity_ok = false;
  bool equioscillates = false;
  bool lp_ok = false;

  // An unresolvable LP comparison does not count against the report.
  bool ok() const { return identity_ok && equioscillates && (lp_ok || !lp_resolvable); }
};

// Certifies that q_t minimizes max over D_kappa of |x P(x) - 1| among odd
// polynomials of degree 2t - 1. Requires 1 <= t <= 32.
OptimalityReport optimality_check(int t, double kappa);

}  // namespace chebqls
