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

#include "chebqls/cheb_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace chebqls {

namespace {

constexpr double kPi = std::numbers::pi;

// Largest t * log(u) for which the closed form is evaluated directly.
constexpr double kLogOverflowGuard = 500.0;

void require_degree(int t) {
  if (t < 0) throw std::invalid_argument("Chebyshev degree must be non-negative");
}

// log(u) with u = 1 + e + sqrt(e (2 + e)), the larger root for x = 1 + e.
double log_growth(double excess) {
  return std::log1p(excess + std::sqrt(excess * (2.0 + excess)));
}

// cos(pi * num / den) with the numerator reduced modulo 2 den first.
double cos_pi_ratio(long long num, long long den) {
  const long long period = 2 * den;
  num %= period;
  if (num < 0) num += period;
  return std::cos(kPi * static_cast<double>(num) / static_cast<double>(den));
}

Parity parity_of(int t) { return t % 2 == 0 ? Parity::even : Parity::odd; }

ChebSeries restrict_parity(std::vector<double> by_degree, Parity hint) {
  if (hint == Parity::none) return ChebSeries(std::move(by_degree), Parity::none);
  const std::size_t keep = hint == Parity::odd ? 1 : 0;
  const std::size_t drop = 1 - keep;
  double scale = 0.0;
  for (double c : by_degree) scale = std::max(scale, std::abs(c));
  const double tol = 1e-10 * std::max(1.0, scale);
  for (std::size_t i = drop; i < by_degree.size(); i += 2) {
    if (std::abs(by_degree[i]) > tol) {
      std::ostringstream msg;
      msg << "interpolant is not " << to_string(hint) << ": coefficient of T_" << i
          << " is " << by_degree[i];
      throw std::domain_error(msg.str());
    }
  }
  std::vector<double> out;
  for (std::size_t i = keep; i < by_degree.size(); i += 2) out.push_back(by_degree[i]);
  return ChebSeries(std::move(out), hint);
}

std::vector<double> interpolate_reference(std::span<const double> values) {
  const auto m = static_cast<long long>(values.size());
  std::vector<double> c(values.size(), 0.0);
  for (long long j = 0; j < m; ++j) {
    double acc = 0.0;
    // T_j(x_k) = cos(j (2k - 1) pi / (2m)).
    for (long long k = 1; k <= m; ++k) acc += values[k - 1] * cos_pi_ratio(j * (2 * k - 1), 2 * m);
    c[j] = (j == 0 ? 1.0 : 2.0) * acc / static_cast<double>(m);
  }
  return c;
}

std::vector<double> interpolate_fast(std::span<const double> values) {
  std::vector<double> c = dct2(values);
  const double m = static_cast<double>(values.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] *= (j == 0 ? 1.0 : 2.0) / m;
  return c;
}

}  // namespace

std::string to_string(Parity p) {
  switch (p) {
    case Parity::odd: return "odd";
    case Parity::even: return "even";
    case Parity::none: break;
  }
  return "none";
}

ChebSeries ChebSeries::unit(int t) {
  require_degree(t);
  const Parity p = parity_of(t);
  std::vector<double> c(static_cast<std::size_t>(t / 2) + 1, 0.0);
  c.back() = 1.0;
  return ChebSeries(std::move(c), p);
}

ChebSeries ChebSeries::from_dense(std::span<const double> by_degree, Parity p) {
  if (p == Parity::none) return ChebSeries(std::vector<double>(by_degree.begin(), by_degree.end()), p);
  std::vector<double> c;
  for (std::size_t i = (p == Parity::odd ? 1 : 0); i < by_degree.size(); i += 2) c.push_back(by_degree[i]);
  return ChebSeries(std::move(c), p);
}

int ChebSeries::basis_degree(std::size_t i) const {
  const int k = static_cast<int>(i);
  switch (parity) {
    case Parity::odd: return 2 * k + 1;
    case Parity::even: return 2 * k;
    case Parity::none: break;
  }
  return k;
}

int ChebSeries::degree() const { return coeffs.empty() ? 0 : basis_degree(coeffs.size() - 1); }

std::vector<double> ChebSeries::dense() const {
  std::vector<double> out(coeffs.empty() ? 0 : static_cast<std::size_t>(degree()) + 1, 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) out[basis_degree(i)] = coeffs[i];
  return out;
}

double ChebSeries::coeff_norm() const {
  double s = 0.0;
  for (double c : coeffs) s += std::abs(c);
  return s;
}

double ChebSeries::coeff_norm2() const {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return std::sqrt(s);
}

ChebNodes::ChebNodes(int m) : order(m) {
  if (m < 1) throw std::invalid_argument("ChebNodes order must be >= 1");
  nodes.resize(m);
  for (int k = 1; k <= m; ++k) {
    // sin form keeps x_{m+1-k} = -x_k exact and small nodes accurate.
    nodes[k - 1] = std::sin(kPi * static_cast<double>(m - 2 * k + 1) / (2.0 * m));
  }
}

double cheb_eval(int t, double x) {
  require_degree(t);
  if (t == 0) return 1.0;
  const double ax = std::abs(x);
  const double sign = (x < 0 && t % 2 == 1) ? -1.0 : 1.0;
  if (ax > 1.0) {
    const double lu = log_growth(ax - 1.0);
    if (t * lu > kLogOverflowGuard) throw std::overflow_error("T_t(x) overflows; use cheb_eval_log");
    const double u = std::exp(lu);
    return sign * 0.5 * (std::pow(u, t) + std::pow(u, -t));
  }
  if (ax < 0.5) {
    double prev = 1.0, cur = x;
    for (int k = 1; k < t; ++k) {
      const double next = 2.0 * x * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  // Near +-1 the recurrence is run on differences d_k = T_k - T_{k-1},
  // which keeps the rounding error linear in t.
  const double twice_gap = 2.0 * (ax - 1.0);
  double cur = ax, diff = ax - 1.0;
  for (int k = 1; k < t; ++k) {
    diff += twice_gap * cur;
    cur += diff;
  }
  return sign * cur;
}

double cheb_eval_log_excess(int t, double excess) {
  require_degree(t);
  if (!(excess > 0.0)) throw std::domain_error("cheb_eval_log requires x > 1");
  if (t == 0) return 0.0;
  const double lu = log_growth(excess);
  // T_t = u^t (1 + u^{-2t}) / 2.
  return t * lu - std::numbers::ln2 + std::log1p(std::exp(-2.0 * t * lu));
}

double cheb_eval_log(int t, double x) {
  if (!(x > 1.0)) throw std::domain_error("cheb_eval_log requires x > 1");
  return cheb_eval_log_excess(t, x - 1.0);
}

double cheb_eval_halving(int t, double x) {
  require_degree(t);
  if (t == 0) return 1.0;
  // Invariant: (lo, hi) = (T_k, T_{k+1}) for the prefix k of t's bits.
  double lo = 1.0, hi = x;
  for (int bit = std::bit_width(static_cast<unsigned>(t)) - 1; bit >= 0; --bit) {
    const double mixed = 2.0 * lo * hi - x;
    if ((t >> bit) & 1) {
      lo = mixed;
      hi = 2.0 * hi * hi - 1.0;
    } else {
      hi = mixed;
      lo = 2.0 * lo * lo - 1.0;
    }
  }
  return lo;
}

double series_eval(const ChebSeries& s, double x) {
  if (s.coeffs.empty()) return 0.0;
  // Basis steps by one (none) or two (odd/even) degrees; either way the
  // step satisfies phi_{k+1} = alpha phi_k - phi_{k-1}.
  const double y = s.parity == Parity::none ? x : 2.0 * x * x - 1.0;
  const double alpha = 2.0 * y;
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t i = s.coeffs.size(); i-- > 0;) {
    const double b0 = s.coeffs[i] + alpha * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  // Now b1 = b_0 and b2 = b_1.
  switch (s.parity) {
    case Parity::odd: return x * (b1 - b2);
    case Parity::even: return b1 - y * b2;
    case Parity::none: break;
  }
  return b1 - x * b2;
}

void fft_inplace(std::vector<std::complex<double>>& data) {
  const std::size_t n = data.size();
  if (n == 0 || !std::has_single_bit(n)) throw std::invalid_argument("FFT length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const double angle = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(len);
      const std::complex<double> w(std::cos(angle), std::sin(angle));
      for (std::size_t start = 0; start < n; start += len) {
        const auto u = data[start + k];
        const auto v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

std::vector<double> dct2(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m == 0 || !std::has_single_bit(m)) throw std::invalid_argument("DCT length must be a power of two");
  // sum_n v_n e^{-i pi j (2n+1) / 2m} = e^{-i pi j / 2m} * FFT_{2m}(v, 0...)_j.
  std::vector<std::complex<double>> buf(2 * m);
  for (std::size_t n = 0; n < m; ++n) buf[n] = values[n];
  fft_inplace(buf);
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double angle = -kPi * static_cast<double>(j) / (2.0 * static_cast<double>(m));
    out[j] = (buf[j] * std::complex<double>(std::cos(angle), std::sin(angle))).real();
  }
  return out;
}

ChebSeries interpolate(std::span<const double> values, Parity parity_hint, InterpMethod method) {
  if (values.empty()) throw std::invalid_argument("interpolate: no values");
  std::vector<double> c;
  if (method == InterpMethod::fast) {
    if (!std::has_single_bit(values.size()))
      throw std::invalid_argument("interpolate: fast path needs a power-of-two node count; use interpolate_function");
    c = interpolate_fast(values);
  } else {
    c = interpolate_reference(values);
  }
  return restrict_parity(std::move(c), parity_hint);
}

ChebSeries interpolate_function(const std::function<double(double)>& f, int m, Parity parity_hint) {
  if (m < 1) throw std::invalid_argument("interpolate_function: m must be >= 1");
  const int padded = static_cast<int>(std::bit_ceil(static_cast<unsigned>(m)));
  const ChebNodes nodes(padded);
  std::vector<double> values(padded);
  for (int k = 0; k < padded; ++k) values[k] = f(nodes.nodes[k]);
  std::vector<double> c = interpolate_fast(values);
  c.resize(static_cast<std::size_t>(m));
  return restrict_parity(std::move(c), parity_hint);
}

std::vector<double> cheb_grid(double lo, double hi, int count) {
  if (count < 2) count = 2;
  std::vector<double> g(static_cast<std::size_t>(count));
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int k = 0; k < count; ++k) {
    // Extrema of T_{count-1}, mapped from [-1, 1]; end points are exact.
    const double u = std::sin(kPi * static_cast<double>(count - 1 - 2 * k) / (2.0 * (count - 1)));
    g[k] = mid + half * u;
  }
  g.front() = hi;
  g.back() = lo;
  return g;
}

int default_grid_size(int degree) { return std::max(4 * degree, 1024) + 2; }

double sup_norm(const ChebSeries& s, int grid) {
  if (grid <= 0) grid = default_grid_size(s.degree());
  double m = 0.0;
  for (double x : cheb_grid(-1.0, 1.0, grid)) m = std::max(m, std::abs(series_eval(s, x)));
  return m;
}

void write_csv(std::ostream& out, const ChebSeries& s) {
  out << "index,basis_degree,coefficient\n";
  const auto old = out.precision(17);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) out << i << ',' << s.basis_degree(i) << ',' << s.coeffs[i] << '\n';
  out.precision(old);
}

ChebSeries read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("index,basis_degree,coefficient", 0) != 0)
    throw std::runtime_error("ChebSeries CSV: missing header");
  std::vector<double> coeffs;
  std::vector<int> degrees;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string idx, deg, val;
    if (!std::getline(row, idx, ',') || !std::getline(row, deg, ',') || !std::getline(row, val))
      throw std::runtime_error("ChebSeries CSV: malformed row '" + line + "'");
    if (std::stoul(idx) != coeffs.size()) throw std::runtime_error("ChebSeries CSV: rows out of order");
    degrees.push_back(std::stoi(deg));
    coeffs.push_back(std::stod(val));
  }
  Parity p = Parity::none;
  if (!degrees.empty()) {
    const bool odd = degrees[0] == 1, even = degrees[0] == 0 && (degrees.size() < 2 || degrees[1] == 2);
    p = odd ? Parity::odd : (even && degrees.size() > 1 ? Parity::even : Parity::none);
  }
  ChebSeries s(std::move(coeffs), p);
  for (std::size_t i = 0; i < degrees.size(); ++i)
    if (s.basis_degree(i) != degrees[i]) throw std::runtime_error("ChebSeries CSV: inconsistent basis degrees");
  return s;
}

}  // namespace chebqls
