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

#include "chebqls/special_funcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace chebqls {
namespace {

constexpr int kMaxMonomial = 16000;
constexpr double kRescale = 1e-250;

void check_bessel_args(int n, double x) {
  if (n < 0) throw std::invalid_argument("Bessel order must be >= 0");
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("Bessel argument must be finite and >= 0");
}

// Two-term power series for tiny x, where 2k/x would overflow the recurrence.
double bessel_small(int n, double x) {
  const double lead = std::exp(n * std::log(0.5 * x) - std::lgamma(n + 1.0));
  return std::exp(-x) * lead * (1.0 + 0.25 * x * x / (n + 1.0));
}

// Chebyshev coefficients of x^n by basis degree, accumulated with weight w.
void add_monomial(std::vector<double>& dense, int n, double w) {
  if (n > kMaxMonomial) throw std::invalid_argument("monomial degree above " + std::to_string(kMaxMonomial));
  // Start from j = n with 2^{1-n} and walk down: binom(n, k+1) = binom(n, k) (n - k) / (k + 1).
  long double c = std::ldexp(1.0L, 1 - n);
  for (int k = 0; 2 * k <= n; ++k) {
    const int j = n - 2 * k;
    dense[j] += w * static_cast<double>(j == 0 ? 0.5L * c : c);
    c = c * (n - k) / (k + 1);
  }
}

double erf_coefficient(double kappa, const std::vector<double>& s, int n) {
  const double sign = n % 2 ? -1.0 : 1.0;
  return sign * (2.0 * kappa / std::sqrt(std::numbers::pi)) * (s[n] + s[n + 1]) / (2.0 * n + 1.0);
}

// Index beyond which the analytic tail of the erf series is below 1e-22.
int erf_negligible_index(double kappa, int from) {
  return std::max(from, static_cast<int>(std::ceil(kappa * kappa))) + 75;
}

// Target step function; nan marks the excluded neighborhoods.
double step_target(StepShape shape, double delta, double x) {
  if (shape == StepShape::sign) {
    if (std::abs(x) < delta) return std::numeric_limits<double>::quiet_NaN();
    return x > 0 ? 1.0 : -1.0;
  }
  if (std::abs(std::abs(x) - 0.5) < delta) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(x) <= 0.5 ? 1.0 : 0.0;
}

double step_error(const ChebSeries& s, StepShape shape, double delta, int points) {
  double err = 0.0;
  for (double x : cheb_grid(-1.0, 1.0, points)) {
    const double want = step_target(shape, delta, x);
    if (!std::isnan(want)) err = std::max(err, std::abs(series_eval(s, x) - want));
  }
  // Neighborhood edges are where the error peaks.
  const std::vector<double> edges = shape == StepShape::sign
                                        ? std::vector<double>{-1.0, -delta, delta, 1.0}
                                        : std::vector<double>{-1.0, -0.5 - delta, -0.5 + delta, 0.5 - delta, 0.5 + delta, 1.0};
  for (double x : edges) {
    const double want = step_target(shape, delta, x);
    if (!std::isnan(want)) err = std::max(err, std::abs(series_eval(s, x) - want));
  }
  return err;
}

}  // namespace

std::vector<double> bessel_i_scaled_array(int n_max, double x) {
  check_bessel_args(n_max, x);
  std::vector<double> out(n_max + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (x < 1e-100) {
    for (int k = 0; k <= n_max; ++k) out[k] = bessel_small(k, x);
    return out;
  }
  // Start far enough above both n_max and the bulk of the normalization sum
  // (I_k / I_0 ~ exp(-k^2 / 2x)) for the minimal solution to dominate.
  const double nm = n_max;
  const int start = static_cast<int>(std::ceil(std::sqrt(nm * nm + 80.0 * x))) + 30;
  double above = 0.0, cur = 1e-280, sum = 0.0;
  for (int k = start; k >= 1; --k) {
    if (k <= n_max) out[k] = cur;
    sum += 2.0 * cur;
    const double below = (2.0 * k / x) * cur + above;
    above = cur;
    cur = below;
    if (cur > 1e250) {
      cur *= kRescale;
      above *= kRescale;
      sum *= kRescale;
      for (int j = k; j <= n_max; ++j) out[j] *= kRescale;
    }
  }
  out[0] = cur;
  sum += cur;
  for (double& v : out) v /= sum;
  return out;
}

double bessel_i_scaled(int n, double x) {
  check_bessel_args(n, x);
  return bessel_i_scaled_array(n, x)[n];
}

ChebSeries monomial_cheb(int n) {
  if (n < 0) throw std::invalid_argument("monomial degree must be >= 0");
  std::vector<double> dense(n + 1, 0.0);
  add_monomial(dense, n, 1.0);
  return ChebSeries::from_dense(dense, n % 2 ? Parity::odd : Parity::even);
}

ChebSeries exp_cheb(double kappa, int degree) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be finite and >= 0");
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  std::vector<double> dense(degree + 1, 0.0);
  for (int n = 0; n <= degree; ++n) {
    // e^{-kappa} kappa^n / n! in log form.
    const double w = kappa == 0.0 ? (n == 0 ? 1.0 : 0.0)
                                  : std::exp(-kappa + n * std::log(kappa) - std::lgamma(n + 1.0));
    if (w != 0.0) add_monomial(dense, n, w);
  }
  return ChebSeries::from_dense(dense, Parity::none);
}

ChebSeries slog_cheb(double kappa, int degree) {
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be finite and >= 1");
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  const double r = (kappa - 1.0) / (kappa + 1.0);
  std::vector<double> dense(degree + 1, 0.0);
  dense[0] = std::log((kappa + 1.0) / (2.0 * kappa));
  double rn = 1.0;
  for (int n = 1; n <= degree; ++n) {
    rn *= r;
    if (rn == 0.0) break;
    add_monomial(dense, n, (n % 2 ? 1.0 : -1.0) * rn / n);
  }
  return ChebSeries::from_dense(dense, Parity::none);
}

double slog_norm_bound(double kappa, int degree) {
  if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  const double r = (kappa - 1.0) / (kappa + 1.0);
  double total = std::abs(std::log((kappa + 1.0) / (2.0 * kappa)));
  double rn = 1.0;
  for (int n = 1; n <= degree; ++n) {
    rn *= r;
    total += rn / n;
  }
  return total;
}

ChebSeries erf_cheb(double kappa, int n_max) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be finite and > 0");
  if (n_max < 0) throw std::invalid_argument("N must be >= 0");
  const std::vector<double> s = bessel_i_scaled_array(n_max + 1, 0.5 * kappa * kappa);
  std::vector<double> c(n_max + 1);
  for (int n = 0; n <= n_max; ++n) c[n] = erf_coefficient(kappa, s, n);
  return ChebSeries(std::move(c), Parity::odd);
}

double erf_coeff_bound(double kappa, int n) {
  const double k2 = kappa * kappa, e = n + 0.5;
  return (4.0 / std::numbers::pi) / (2.0 * n + 1.0) * std::exp(e * std::log(k2 / (k2 + e)));
}

double erf_tail_norm(double kappa, int n_max) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be finite and > 0");
  if (n_max < 0) throw std::invalid_argument("N must be >= 0");
  const int stop = erf_negligible_index(kappa, n_max + 1);
  const std::vector<double> s = bessel_i_scaled_array(stop + 1, 0.5 * kappa * kappa);
  double tail = 0.0;
  // Smallest terms first.
  for (int n = stop; n > n_max; --n) tail += std::abs(erf_coefficient(kappa, s, n));
  return tail;
}

ErfNorm erf_coeff_norm(double kappa, int n_max) {
  if (n_max < 1) throw std::invalid_argument("N must be >= 1");
  const ChebSeries head = erf_cheb(kappa, n_max);
  ErfNorm out;
  out.norm = head.coeff_norm();
  out.head_bound = (6.0 + 2.0 * std::log(static_cast<double>(n_max))) / std::numbers::pi;
  out.tail_bound = n_max >= kappa * kappa ? std::ldexp(1.0, 2 - n_max) : std::numeric_limits<double>::infinity();
  out.full_norm = out.norm + erf_tail_norm(kappa, n_max);
  out.full_bound = 4.0 + 2.0 * std::log(kappa);
  if (out.norm > out.head_bound * (1.0 + 1e-12))
    throw std::logic_error("erf head norm " + std::to_string(out.norm) + " exceeds " + std::to_string(out.head_bound));
  if (out.full_norm > out.full_bound * (1.0 + 1e-12))
    throw std::logic_error("erf series norm " + std::to_string(out.full_norm) + " exceeds " + std::to_string(out.full_bound));
  return out;
}

int erf_degree(double kappa, double epsilon) {
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be finite and >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const double k2 = kappa * kappa;
  const double big_k = std::ceil(kappa);
  const double floor_small = std::exp2(2.0 - k2);
  const double eps_prime = epsilon - std::exp2(2.0 - big_k * big_k);
  long n = 0;
  if (epsilon <= floor_small || eps_prime <= 0.0) {
    // Tail-bound regime: keep everything below max(log2(4/eps), kappa^2).
    n = static_cast<long>(std::max(std::ceil(std::log2(4.0 / epsilon)), std::ceil(k2)));
  } else {
    const double arg = 4.0 * big_k / (std::numbers::pi * eps_prime);
    const double alpha0 = std::max(1.0, std::ceil(std::sqrt(2.0 * std::log(std::max(arg, 1.0)))));
    n = static_cast<long>(alpha0 * big_k) - 1;
  }
  n = std::max(0L, n);
  if (n > std::numeric_limits<int>::max() / 4) throw std::invalid_argument("erf degree out of range");
  const double dropped = erf_tail_norm(kappa, static_cast<int>(n));
  if (dropped > epsilon)
    throw std::logic_error("erf_degree: dropped coefficient norm " + std::to_string(dropped) + " exceeds epsilon");
  return static_cast<int>(n);
}

double erf_reference(double z) {
  if (std::isnan(z)) return z;
  const double a = std::abs(z);
  const double sgn = z < 0 ? -1.0 : 1.0;
  if (a <= 3.0) {
    // erf(z) = (2/sqrt(pi)) e^{-z^2} sum_n 2^n z^{2n+1} / (1 3 5 ... (2n+1)), all terms positive.
    const double z2 = a * a;
    double term = a, sum = a;
    for (int n = 1; n < 500; ++n) {
      term *= 2.0 * z2 / (2.0 * n + 1.0);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sgn * 2.0 / std::sqrt(std::numbers::pi) * std::exp(-z2) * sum;
  }
  // erfc(z) = e^{-z^2}/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))), modified Lentz.
  const double tiny = 1e-300;
  double f = a, c = a, d = 0.0;
  for (int k = 1; k < 5000; ++k) {
    const double ak = 0.5 * k;
    d = a + ak * d;
    d = d == 0.0 ? tiny : d;
    c = a + ak / c;
    c = c == 0.0 ? tiny : c;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double erfc = std::exp(-a * a) / std::sqrt(std::numbers::pi) / f;
  return sgn * (1.0 - erfc);
}

std::string to_string(StepShape s) { return s == StepShape::sign ? "sign" : "rect"; }

StepShape step_shape_from_string(const std::string& s) {
  if (s == "sign") return StepShape::sign;
  if (s == "rect") return StepShape::rect;
  throw std::invalid_argument("unknown step shape '" + s + "'");
}

StepApprox sign_rect_approx(double delta, double epsilon, StepShape shape) {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta must be in (0, 1/2)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const double half = 0.5 * epsilon;

  // Smallest kappa with erfc(kappa delta) <= epsilon / 2.
  double lo = 0.0, hi = 1.0;
  while (std::erfc(hi * delta) > half) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) throw std::runtime_error("sign_rect_approx: no feasible kappa");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid * delta) <= half ? hi : lo) = mid;
  }
  StepApprox out;
  out.kappa = std::max(hi, 1.0);

  if (shape == StepShape::sign) {
    const int n = erf_degree(out.kappa, half);
    if (2L * n + 1 > kMaxStepDegree)
      throw std::runtime_error("sign_rect_approx: degree " + std::to_string(2L * n + 1) + " exceeds the cap");
    out.series = erf_cheb(out.kappa, n);
  } else {
    const double k = out.kappa;
    auto f = [k](double x) { return 0.5 * (std::erf(k * (x + 0.5)) - std::erf(k * (x - 0.5))); };
    // Double the interpolation size until the top quarter of the spectrum is
    // negligible, then drop the trailing coefficients worth <= epsilon / 4.
    for (int m = 64;; m *= 2) {
      if (m > 2 * kMaxStepDegree) throw std::runtime_error("sign_rect_approx: degree exceeds the cap");
      ChebSeries s = interpolate_function(f, m, Parity::none);
      double top = 0.0;
      for (int j = 3 * m / 4; j < m; ++j) top += std::abs(s.coeffs[j]);
      if (top > 1e-3 * half) continue;
      double dropped = 0.0;
      std::size_t keep = s.coeffs.size();
      while (keep > 1 && dropped + std::abs(s.coeffs[keep - 1]) <= 0.5 * half) dropped += std::abs(s.coeffs[--keep]);
      s.coeffs.resize(keep);
      if (static_cast<int>(keep) - 1 > kMaxStepDegree)
        throw std::runtime_error("sign_rect_approx: degree " + std::to_string(keep - 1) + " exceeds the cap");
      out.series = std::move(s);
      break;
    }
  }
  const double err = step_error(out.series, shape, delta, default_grid_size(out.series.degree()));
  if (err > epsilon) throw std::logic_error("sign_rect_approx: grid error " + std::to_string(err) + " exceeds epsilon");
  return out;
}

}  // namespace chebqls
