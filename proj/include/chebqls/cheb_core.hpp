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

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chebqls {

// Which Chebyshev polynomials a series stores. For `odd`, coefficient i
// multiplies T_{2i+1}; for `even`, T_{2i}; for `none`, T_i.
enum class Parity { none, odd, even };

std::string to_string(Parity p);

// A polynomial in the Chebyshev basis of the first kind on [-1, 1].
struct ChebSeries {
  std::vector<double> coeffs;
  Parity parity = Parity::none;

  ChebSeries() = default;
  ChebSeries(std::vector<double> c, Parity p) : coeffs(std::move(c)), parity(p) {}

  // T_t as a single-term series, stored with the parity of t.
  static ChebSeries unit(int t);

  // Builds a series from coefficients indexed by basis degree. With an
  // odd/even parity the entries of the other parity are dropped.
  static ChebSeries from_dense(std::span<const double> by_degree, Parity p);

  int basis_degree(std::size_t i) const;

  // Basis degree of the last stored coefficient (0 for an empty series).
  int degree() const;

  std::size_t size() const { return coeffs.size(); }

  // Coefficients indexed by basis degree, length degree() + 1.
  std::vector<double> dense() const;

  // Sum of |c_i|; an upper bound for the sup-norm on [-1, 1].
  double coeff_norm() const;
  double coeff_norm2() const;
};

// Roots of T_m: x_k = cos((k - 1/2) pi / m), k = 1..m, in decreasing order.
struct ChebNodes {
  int order = 0;
  std::vector<double> nodes;

  explicit ChebNodes(int m);
};

// T_t(x). Uses the three-term recurrence on [-1, 1] and the closed form
// 1/2 (u^t + u^-t), u = |x| + sqrt(x^2 - 1), outside. Throws
// std::overflow_error when t log u > 500; use cheb_eval_log there.
double cheb_eval(int t, double x);

// log T_t(x) for x > 1. Throws std::domain_error for x <= 1.
double cheb_eval_log(int t, double x);

// Same as cheb_eval_log(t, 1 + excess) without forming 1 + excess, for
// arguments that sit just above 1 (s(0) for large condition numbers).
double cheb_eval_log_excess(int t, double excess);

// T_t(x) in O(log t) operations from the doubling identities
// T_2k = 2 T_k^2 - 1 and T_2k+1 = 2 T_k T_k+1 - x.
double cheb_eval_halving(int t, double x);

// Clenshaw evaluation respecting the stored parity. Arguments outside
// [-1, 1] are accepted; accuracy degrades with the growth of T_n there.
double series_eval(const ChebSeries& s, double x);

enum class InterpMethod { reference, fast };

// Chebyshev coefficients of the interpolant through `values` sampled at
// ChebNodes(values.size()). The fast method is a DCT-II computed with a
// radix-2 FFT and needs a power-of-two length. With an odd/even hint the
// coefficients of the other parity must vanish (|c| <= 1e-10 relative to
// the largest coefficient); std::domain_error otherwise.
ChebSeries interpolate(std::span<const double> values, Parity parity_hint,
                       InterpMethod method = InterpMethod::reference);

// Fast interpolation of a polynomial of degree < m given as a callable.
// Samples at ChebNodes(M) for M = bit_ceil(m) and keeps the first m
// coefficients.
ChebSeries interpolate_function(const std::function<double(double)>& f, int m,
                                Parity parity_hint);

// In-place radix-2 FFT, e^{-2 pi i jk/N} convention. N must be a power of 2.
void fft_inplace(std::vector<std::complex<double>>& data);

// X_j = sum_n v_n cos(pi j (n + 1/2) / m) for a power-of-two length m.
std::vector<double> dct2(std::span<const double> values);

// Chebyshev-distributed points covering [lo, hi] including both ends.
std::vector<double> cheb_grid(double lo, double hi, int count);

// Default resolution for sup-norm measurements of a degree-d polynomial.
int default_grid_size(int degree);

// max |s(x)| over cheb_grid(-1, 1, grid) (grid <= 0 selects the default).
double sup_norm(const ChebSeries& s, int grid = 0);

// CSV with header `index,basis_degree,coefficient`, 17 significant digits.
void write_csv(std::ostream& out, const ChebSeries& s);
ChebSeries read_csv(std::istream& in);

}  // namespace chebqls
