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

#include <string>
#include <vector>

#include "chebqls/cheb_core.hpp"

namespace chebqls {

// e^{-x} I_n(x) by Miller's backward recurrence, normalized with
// I_0 + 2 sum_{k>=1} I_k = e^x. Throws std::invalid_argument for n < 0 or
// x < 0 (or non-finite).
double bessel_i_scaled(int n, double x);

// e^{-x} I_k(x) for k = 0..n_max from a single backward pass.
std::vector<double> bessel_i_scaled_array(int n_max, double x);

// Exact Chebyshev expansion of x^n (parity of n); coefficient 1-norm is 1.
ChebSeries monomial_cheb(int n);

// Taylor polynomial of e^{kappa (x - 1)} of the given degree, re-expanded
// in the Chebyshev basis. Coefficient 1-norm <= 1.
ChebSeries exp_cheb(double kappa, int degree);

// Taylor polynomial of slog_kappa(x) = log(1/kappa + (x + 1)(1 - 1/kappa) / 2)
// around 0, re-expanded in the Chebyshev basis. Requires kappa >= 1.
ChebSeries slog_cheb(double kappa, int degree);

// Analytic bound on the slog_cheb coefficient 1-norm:
// |log((kappa + 1) / (2 kappa))| + sum_{n=1}^{degree} r^n / n, r = (kappa - 1) / (kappa + 1).
double slog_norm_bound(double kappa, int degree);

// Chebyshev series of erf(kappa x) through T_{2N+1}: the coefficient of
// T_{2n+1} is (2 kappa / sqrt(pi)) (-1)^n (s_n + s_{n+1}) / (2n + 1) with
// s_k = e^{-kappa^2 / 2} I_k(kappa^2 / 2) in scaled form.
ChebSeries erf_cheb(double kappa, int n_max);

// |coefficient of T_{2n+1}| bound (4/pi) (1/(2n+1)) (k^2 / (k^2 + n + 1/2))^{n + 1/2}.
double erf_coeff_bound(double kappa, int n);

struct ErfNorm {
  double norm = 0.0;        // sum_{n<=N} |c_n|
  double head_bound = 0.0;  // (6 + 2 log N) / pi
  double tail_bound = 0.0;  // 2^{2-N} bound on sum_{n>=N} |c_n| when N >= kappa^2, else +inf
  double full_norm = 0.0;   // norm of the whole series (summed until negligible)
  double full_bound = 0.0;  // 4 + 2 log kappa
};

// Head and tail norms of the erf series truncated at n = N. Throws
// std::invalid_argument for N < 1 and std::logic_error if norm > head_bound
// or full_norm > full_bound.
ErfNorm erf_coeff_norm(double kappa, int n_max);

// sum_{n > N} |c_n| of the erf series, summed until the analytic remainder
// bound falls below 1e-22.
double erf_tail_norm(double kappa, int n_max);

// Truncation index N (keep T_1 .. T_{2N+1}, polynomial degree 2N + 1) that
// approximates erf(kappa x) within epsilon on [-1, 1]:
//   epsilon <= 2^{2 - k^2}: N = ceil(log2(4 / epsilon)),
//   otherwise:              N = alpha0 K - 1, alpha0 = ceil(sqrt(2 log(4K / (pi eps')))),
// with K = ceil(kappa), eps' = epsilon - 2^{2 - K^2}, alpha0 clamped to >= 1.
// Throws std::logic_error if the measured dropped 1-norm exceeds epsilon.
int erf_degree(double kappa, double epsilon);

// erf(z) independent of the Chebyshev machinery: Taylor series for |z| <= 3
// and the continued fraction of erfc beyond.
double erf_reference(double z);

enum class StepShape { sign, rect };
std::string to_string(StepShape s);
StepShape step_shape_from_string(const std::string& s);

struct StepApprox {
  ChebSeries series;
  double kappa = 0.0;
};

// erf-based approximant of sign(x) (odd) or the rectangle 1{|x| <= 1/2}
// (interpolated, parity none) within epsilon outside the delta-neighborhoods
// of the jumps. kappa is the smallest value (found by bisection) with
// erfc(kappa delta) <= epsilon / 2; the remaining epsilon / 2 goes to
// truncation. Throws std::invalid_argument unless 0 < delta < 1/2 and
// epsilon > 0, and std::runtime_error when the required degree exceeds
// kMaxStepDegree.
inline constexpr int kMaxStepDegree = 1 << 16;
StepApprox sign_rect_approx(double delta, double epsilon, StepShape shape);

}  // namespace chebqls
