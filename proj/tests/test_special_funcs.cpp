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
#include <cstdint>
#include <numbers>
#include <random>

#include "chebqls/special_funcs.hpp"

using namespace chebqls;

namespace {

// e^{-x} I_n(x) from the power series; every term is positive.
double bessel_series(int n, double x) {
  long double sum = 0.0L;
  for (int m = 0; m < 400; ++m) {
    const long double lt = (2.0L * m + n) * std::log(0.5L * x) - std::lgamma(m + 1.0L) - std::lgamma(m + n + 1.0L);
    const long double term = std::exp(lt - x);
    sum += term;
    if (m > x && term < 1e-22L * sum) break;
  }
  return static_cast<double>(sum);
}

// Debye uniform expansion of e^{-x} I_nu(x) for large nu, four correction terms.
double bessel_debye(double nu, double x) {
  const double z = x / nu;
  const double root = std::sqrt(1.0 + z * z);
  const double t = 1.0 / root;
  const double eta = root + std::log(z / (1.0 + root));
  const double t2 = t * t;
  const double u1 = t * (3.0 - 5.0 * t2) / 24.0;
  const double u2 = t2 * (81.0 - 462.0 * t2 + 385.0 * t2 * t2) / 1152.0;
  const double u3 = t * t2 * (30375.0 - 369603.0 * t2 + 765765.0 * t2 * t2 - 425425.0 * t2 * t2 * t2) / 414720.0;
  const double u4 = t2 * t2 *
                    (4465125.0 - 94121676.0 * t2 + 349922430.0 * t2 * t2 - 446185740.0 * t2 * t2 * t2 +
                     185910725.0 * t2 * t2 * t2 * t2) /
                    39813120.0;
  const double corr = 1.0 + u1 / nu + u2 / (nu * nu) + u3 / (nu * nu * nu) + u4 / (nu * nu * nu * nu);
  return std::exp(nu * (eta - z) - 0.5 * std::log(2.0 * std::numbers::pi * nu) - 0.25 * std::log(1.0 + z * z)) * corr;
}

std::uint64_t binom(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double grid_error(const ChebSeries& s, double lo, double hi, const std::function<double(double)>& f) {
  double err = 0.0;
  for (double x : cheb_grid(lo, hi, 4001)) err = std::max(err, std::abs(series_eval(s, x) - f(x)));
  return err;
}

}  // namespace

TEST_CASE("scaled Bessel functions") {
  CHECK(bessel_i_scaled(0, 0.0) == 1.0);
  CHECK(bessel_i_scaled(1, 0.0) == 0.0);
  CHECK(rel(bessel_i_scaled(0, 1.0), std::exp(-1.0) * 1.2660658777520082) <= 1e-14);
  CHECK(rel(bessel_i_scaled(1, 1.0), std::exp(-1.0) * 0.5651591039924851) <= 1e-14);

  for (int n : {0, 1, 5, 20, 60})
    for (double x : {1e-3, 0.5, 3.0, 17.0, 40.0}) CHECK(rel(bessel_i_scaled(n, x), bessel_series(n, x)) <= 1e-12);

  // Large order and argument.
  for (auto [n, x] : {std::pair{10000, 1e6}, {5000, 2e4}, {1000, 5000.0}, {2000, 1e6}, {300, 1e4}})
    CHECK(rel(bessel_i_scaled(n, x), bessel_debye(n, x)) <= 1e-10);

  // I_{n-1} - I_{n+1} = (2n / x) I_n in scaled form.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> nd(1, 50);
  std::uniform_real_distribution<double> xd(0.01, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = nd(rng);
    const double x = xd(rng);
    const std::vector<double> s = bessel_i_scaled_array(n + 1, x);
    const double lhs = s[n - 1] - s[n + 1];
    CHECK(std::abs(lhs - 2.0 * n / x * s[n]) <= 1e-13 * s[n - 1]);
  }
  const std::vector<double> s = bessel_i_scaled_array(40, 7.0);
  for (int k = 1; k <= 40; ++k) CHECK(s[k] <= s[k - 1]);
  CHECK(s[0] <= 1.0);
  CHECK_THROWS_AS(bessel_i_scaled(0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(bessel_i_scaled(-1, 1.0), std::invalid_argument);
}

TEST_CASE("monomial expansion") {
  const ChebSeries m1 = monomial_cheb(1);
  CHECK(m1.dense() == std::vector<double>{0.0, 1.0});
  const ChebSeries m2 = monomial_cheb(2);
  CHECK(m2.dense() == std::vector<double>{0.5, 0.0, 0.5});
  CHECK(monomial_cheb(0).dense() == std::vector<double>{1.0});

  // Integer binomials: c_j = binom(n, (n - j)/2) / 2^{n-1}, j = 0 halved.
  for (int n = 1; n <= 40; ++n) {
    const std::vector<double> d = monomial_cheb(n).dense();
    for (int j = n % 2; j <= n; j += 2) {
      double want = std::ldexp(static_cast<double>(binom(n, (n - j) / 2)), 1 - n);
      if (j == 0) want *= 0.5;
      CHECK(rel(d[j], want) <= 1e-15);
    }
  }

  const ChebSeries m10 = monomial_cheb(10);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    CHECK(std::abs(series_eval(m10, x) - std::pow(x, 10)) <= 1e-12);
  }
  for (int n : {10, 101, 1000}) CHECK(monomial_cheb(n).coeff_norm() <= 1.0 + 1e-12);
}

TEST_CASE("scaled exponential") {
  CHECK(exp_cheb(0.0, 7).dense()[0] == 1.0);
  CHECK(exp_cheb(0.0, 7).coeff_norm() == 1.0);
  const ChebSeries e = exp_cheb(5.0, 40);
  CHECK(grid_error(e, -1.0, 1.0, [](double x) { return std::exp(5.0 * (x - 1.0)); }) <= 1e-8);
  CHECK(e.coeff_norm() <= 1.0 + 1e-8);
  for (double kappa : {0.5, 3.0, 12.0}) {
    const int d = 20;
    // At x = 1 the truncation leaves e^{-k} sum_{n > d} k^n / n!.
    double tail = 0.0;
    for (int n = d + 1; n < 200; ++n) tail += std::exp(-kappa + n * std::log(kappa) - std::lgamma(n + 1.0));
    CHECK(std::abs(series_eval(exp_cheb(kappa, d), 1.0) - 1.0) <= tail + 1e-14);
    CHECK(exp_cheb(kappa, d).coeff_norm() <= 1.0 + 1e-14);
  }
}

TEST_CASE("scaled logarithm") {
  CHECK(slog_cheb(1.0, 10).coeff_norm() == 0.0);
  const double kappa = 10.0;
  auto slog = [kappa](double x) { return std::log(1.0 / kappa + 0.5 * (x + 1.0) * (1.0 - 1.0 / kappa)); };
  const ChebSeries s60 = slog_cheb(kappa, 60);
  CHECK(grid_error(s60, -1.0 + 1e-3, 1.0, slog) <= 1e-6);
  const double r = 9.0 / 11.0;
  double tail = 0.0;
  for (int n = 61; n < 2000; ++n) tail += std::pow(r, n) / n;
  CHECK(std::abs(series_eval(s60, 1.0)) <= tail + 1e-14);
  for (int d : {10, 100, 1000}) {
    const ChebSeries s = slog_cheb(kappa, d);
    CHECK(s.coeff_norm() <= slog_norm_bound(kappa, d) * (1.0 + 1e-12));
    CHECK(s.coeff_norm() <= std::abs(std::log(0.55)) + 1.0 + std::log(static_cast<double>(d)));
  }
  CHECK_THROWS_AS(slog_cheb(0.5, 3), std::invalid_argument);
}

TEST_CASE("reference erf") {
  for (double z : {-5.5, -3.0, -1.2, -1e-3, 0.0, 0.3, 1.0, 2.999, 3.001, 4.0, 6.0, 27.0})
    CHECK(std::abs(erf_reference(z) - std::erf(z)) <= 2e-15);
  CHECK(erf_reference(0.0) == 0.0);
}

TEST_CASE("erf series") {
  CHECK(series_eval(erf_cheb(3.0, 20), 0.0) == 0.0);
  const ChebSeries e2 = erf_cheb(2.0, 32);
  CHECK(e2.parity == Parity::odd);
  CHECK(grid_error(e2, -1.0, 1.0, [](double x) { return erf_reference(2.0 * x); }) <= 1e-10);
  for (std::size_t n = 0; n + 1 < e2.size(); ++n) {
    if (std::abs(e2.coeffs[n + 1]) < 1e-300) break;
    CHECK(e2.coeffs[n] * e2.coeffs[n + 1] < 0.0);
  }

  for (double kappa : {0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0}) {
    const ChebSeries c = erf_cheb(kappa, 200);
    for (int n = 0; n <= 200; ++n) CHECK(std::abs(c.coeffs[n]) <= erf_coeff_bound(kappa, n) * (1.0 + 1e-12));
    CHECK(c.coeff_norm() >= sup_norm(c) * (1.0 - 1e-12));
  }

  // Error decreases with N until the floating-point floor.
  const double kappa = 6.0;
  double prev = 1e300;
  for (int n = 1; n <= 80; n += 3) {
    const double err = grid_error(erf_cheb(kappa, n), -1.0, 1.0, [kappa](double x) { return erf_reference(kappa * x); });
    if (prev > 1e-13) CHECK(err <= prev * (1.0 + 1e-9));
    prev = err;
  }
}

TEST_CASE("erf coefficient norms") {
  const ErfNorm n2 = erf_coeff_norm(2.0, 4);
  CHECK(n2.norm <= (6.0 + 2.0 * std::log(4.0)) / std::numbers::pi);
  CHECK(n2.full_norm <= 4.0 + 2.0 * std::log(2.0));
  CHECK(n2.tail_bound == doctest::Approx(0.25));

  const ErfNorm n10 = erf_coeff_norm(10.0, 100);
  CHECK(n10.tail_bound == std::ldexp(1.0, -98));
  CHECK(erf_tail_norm(10.0, 99) <= std::ldexp(1.0, -98));
  CHECK(std::isinf(erf_coeff_norm(10.0, 50).tail_bound));

  const ErfNorm n1 = erf_coeff_norm(1.0, 1);
  const double s0 = bessel_i_scaled(0, 0.5), s1 = bessel_i_scaled(1, 0.5), s2 = bessel_i_scaled(2, 0.5);
  const double direct = 2.0 / std::sqrt(std::numbers::pi) * ((s0 + s1) + (s1 + s2) / 3.0);
  CHECK(n1.norm == doctest::Approx(direct).epsilon(1e-14));
  CHECK(n1.norm > 0.0);

  for (int kappa = 2; kappa <= 64; ++kappa) {
    const ErfNorm n = erf_coeff_norm(kappa, kappa * kappa);
    CHECK(n.full_norm <= 4.0 + 2.0 * std::log(static_cast<double>(kappa)));
  }
  CHECK_THROWS_AS(erf_coeff_norm(2.0, 0), std::invalid_argument);
}

TEST_CASE("erf truncation degree") {
  const double eps_p = 1e-3 - std::exp2(2.0 - 100.0);
  const int alpha0 = static_cast<int>(std::ceil(std::sqrt(2.0 * std::log(40.0 / (std::numbers::pi * eps_p)))));
  CHECK(erf_degree(10.0, 1e-3) == alpha0 * 10 - 1);
  CHECK(erf_tail_norm(10.0, erf_degree(10.0, 1e-3)) <= 1e-3);

  CHECK(erf_degree(2.0, 0.125) == 5);
  CHECK(erf_degree(2.0, 1e-9) == static_cast<int>(std::ceil(std::log2(4e9))));
  CHECK(erf_degree(1.0, 4.0) <= 1);

  for (double kappa : {10.0, 50.0}) {
    for (double eps : {1e-3, 1e-6}) {
      const int n = erf_degree(kappa, eps);
      const ChebSeries s = erf_cheb(kappa, n);
      CHECK(grid_error(s, -1.0, 1.0, [kappa](double x) { return erf_reference(kappa * x); }) <= eps);
    }
  }
}

TEST_CASE("sign and rectangle approximants") {
  const StepApprox sg = sign_rect_approx(0.1, 1e-3, StepShape::sign);
  CHECK(series_eval(sg.series, 0.0) == 0.0);
  CHECK(sg.series.parity == Parity::odd);
  double err = 0.0;
  for (double x : cheb_grid(0.1, 1.0, 2001)) {
    err = std::max(err, std::abs(series_eval(sg.series, x) - 1.0));
    err = std::max(err, std::abs(series_eval(sg.series, -x) + 1.0));
  }
  CHECK(err <= 1e-3);
  CHECK(std::erfc(sg.kappa * 0.1) <= 0.5e-3 * (1.0 + 1e-9));
  CHECK(std::erfc(0.999 * sg.kappa * 0.1) > 0.5e-3);

  const StepApprox rc = sign_rect_approx(0.05, 1e-2, StepShape::rect);
  CHECK(rc.series.parity == Parity::none);
  double rerr = 0.0;
  for (double x : cheb_grid(-1.0, 1.0, 8001)) {
    const double a = std::abs(x);
    if (a <= 0.45) rerr = std::max(rerr, std::abs(series_eval(rc.series, x) - 1.0));
    if (a >= 0.55) rerr = std::max(rerr, std::abs(series_eval(rc.series, x)));
  }
  CHECK(rerr <= 1e-2);

  CHECK(step_shape_from_string(to_string(StepShape::rect)) == StepShape::rect);
  CHECK_THROWS_AS(sign_rect_approx(0.6, 1e-3, StepShape::sign), std::invalid_argument);
  CHECK_THROWS_AS(sign_rect_approx(0.1, 0.0, StepShape::sign), std::invalid_argument);
  CHECK_THROWS_AS(sign_rect_approx(1e-6, 1e-12, StepShape::sign), std::runtime_error);
}
