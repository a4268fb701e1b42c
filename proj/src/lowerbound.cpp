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

#include "chebqls/lowerbound.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace chebqls {
namespace {

void require_square(const IntMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument(std::string(what) + " must be square and non-empty");
}

void require_binary(const IntMatrix& x) {
  require_square(x, "X");
  if (!x.is_binary()) throw std::invalid_argument("X must have entries in {0, 1}");
}

Int128 entry_sum(const IntMatrix& x) {
  Int128 s = 0;
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) s += x(i, j);
  return s;
}

// B = I + A on the block superdiagonal, 4 x 4 blocks.
IntMatrix block_B(const IntMatrix& a) {
  const int m = a.rows();
  IntMatrix b = IntMatrix::identity(4 * m);
  for (int blk = 0; blk < 3; ++blk)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) b(blk * m + i, (blk + 1) * m + j) = a(i, j);
  return b;
}

bool structure_ok(const IntMatrix& a, const IntMatrix& x) {
  const int n = x.rows(), last = 2 * n + 1;
  if (!(a == a.transpose())) return false;
  Int128 apex0 = 0, apex1 = 0;
  for (int j = 0; j <= last; ++j) {
    apex0 += a(0, j);
    apex1 += a(last, j);
  }
  if (apex0 != n || apex1 != n) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a(1 + i, n + 1 + j) != x(i, j)) return false;
  return true;
}

ColumnNorm column_norm(const IntMatrix& x) {
  const int n = x.rows();
  const IntMatrix a = gadget_matrix(x, true);
  const IntMatrix inv = block_B_inverse(a);
  const int last = inv.cols() - 1;
  ColumnNorm out;
  for (int i = 0; i < inv.rows(); ++i) out.exact += inv(i, last) * inv(i, last);
  const Int128 total = entry_sum(x);
  out.formula = total * total + n + 1;
  for (int i = 0; i < n; ++i) {
    Int128 r = 0;
    for (int j = 0; j < n; ++j) r += x(i, j);
    out.formula += r * r;
  }
  return out;
}

}  // namespace

std::string to_string(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  UInt128 u = neg ? -static_cast<UInt128>(v) : static_cast<UInt128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

IntMatrix::IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool IntMatrix::is_binary() const {
  return std::all_of(data_.begin(), data_.end(), [](Int128 v) { return v == 0 || v == 1; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const Int128 v = a(i, k);
      if (v == 0) continue;
      for (int j = 0; j < b.cols_; ++j) c(i, j) += v * b(k, j);
    }
  return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum dimension mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

IntMatrix operator-(const IntMatrix& a) {
  IntMatrix c = a;
  for (Int128& v : c.data_) v = -v;
  return c;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

IntMatrix random_binary(int n, double density, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("density must be in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  IntMatrix x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = coin(rng) ? 1 : 0;
  return x;
}

IntMatrix gadget_matrix(const IntMatrix& x, bool directed) {
  require_binary(x);
  const int n = x.rows(), last = 2 * n + 1;
  IntMatrix a(2 * n + 2, 2 * n + 2);
  for (int i = 0; i < n; ++i) {
    a(0, 1 + i) = 1;
    a(n + 1 + i, last) = 1;
    for (int j = 0; j < n; ++j) a(1 + i, n + 1 + j) = x(i, j);
  }
  return directed ? a : a + a.transpose();
}

GadgetA build_gadget_A(const IntMatrix& x) {
  GadgetA out;
  out.a = gadget_matrix(x, false);
  const IntMatrix cube = out.a * out.a * out.a;
  out.cube_entry = cube(0, out.a.cols() - 1);
  out.entry_sum = entry_sum(x);
  if (!structure_ok(out.a, x)) throw std::logic_error("gadget matrix does not have the apex/bipartite structure");
  if (out.cube_entry != out.entry_sum)
    throw std::logic_error("(A^3)_{1,2n+2} = " + to_string(out.cube_entry) + " but sum X = " + to_string(out.entry_sum));
  return out;
}

IntMatrix block_B_inverse(const IntMatrix& a) {
  require_square(a, "A");
  const int m = a.rows();
  const IntMatrix a2 = a * a, a3 = a2 * a;
  const IntMatrix* power[4] = {nullptr, &a, &a2, &a3};
  IntMatrix inv = IntMatrix::identity(4 * m);
  for (int r = 0; r < 4; ++r)
    for (int c = r + 1; c < 4; ++c) {
      const int k = c - r;
      const Int128 sign = k % 2 ? -1 : 1;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) inv(r * m + i, c * m + j) = sign * (*power[k])(i, j);
    }
  return inv;
}

BlockB build_block_B(const IntMatrix& a) {
  require_square(a, "A");
  const int m = a.rows();
  BlockB out;
  out.b = block_B(a);
  out.inverse = block_B_inverse(a);
  if (!(out.b * out.inverse == IntMatrix::identity(4 * m))) throw std::logic_error("B times the closed-form inverse is not I");
  out.corner = out.inverse(0, 4 * m - 1);
  out.cube_entry = (a * a * a)(0, m - 1);
  if (out.corner != -out.cube_entry)
    throw std::logic_error("(B^-1)_{1,N} = " + to_string(out.corner) + " but -(A^3)_{1,m} = " + to_string(-out.cube_entry));
  return out;
}

ColumnNorm last_column_norm(const IntMatrix& x) {
  require_binary(x);
  const ColumnNorm out = column_norm(x);
  if (out.exact != out.formula)
    throw std::logic_error("last column norm^2 " + to_string(out.exact) + " != formula " + to_string(out.formula));
  return out;
}

std::vector<IdentityCheck> gadget_identities(const IntMatrix& x) {
  require_binary(x);
  std::vector<IdentityCheck> rows;
  auto add = [&](std::string name, Int128 lhs, Int128 rhs) {
    rows.push_back({std::move(name), to_string(lhs), to_string(rhs), lhs == rhs});
  };
  const IntMatrix a = gadget_matrix(x, false);
  const IntMatrix cube = a * a * a;
  const int last = a.cols() - 1;
  const Int128 total = entry_sum(x);
  add("(A^3)[1,2n+2] = sum X", cube(0, last), total);
  rows.push_back({"A symmetric, apex degrees n", structure_ok(a, x) ? "yes" : "no", "yes", structure_ok(a, x)});

  const IntMatrix b = block_B(a), inv = block_B_inverse(a);
  const bool eye = b * inv == IntMatrix::identity(b.rows());
  rows.push_back({"B * B^-1 = I", eye ? "I" : "not I", "I", eye});
  add("(B^-1)[1,N] = -(A^3)[1,m]", inv(0, inv.cols() - 1), -cube(0, last));
  add("(B^-1)[1,N] = -sum X", inv(0, inv.cols() - 1), -total);

  const ColumnNorm cn = column_norm(x);
  add("||B^-1 e_N||^2 (directed) = formula", cn.exact, cn.formula);
  return rows;
}

}  // namespace chebqls
