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

#include <random>

#include "chebqls/lowerbound.hpp"

using namespace chebqls;

namespace {

// Walks of length 3 from u to v, enumerated vertex by vertex.
Int128 walks3(const IntMatrix& a, int u, int v) {
  Int128 count = 0;
  for (int p = 0; p < a.rows(); ++p)
    for (int q = 0; q < a.rows(); ++q) count += a(u, p) * a(p, q) * a(q, v);
  return count;
}

// Solves B y = e_last by back substitution (B is unit upper triangular).
std::vector<Int128> last_column(const IntMatrix& b) {
  const int n = b.rows();
  std::vector<Int128> y(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    Int128 s = i == n - 1 ? 1 : 0;
    for (int j = i + 1; j < n; ++j) s -= b(i, j) * y[j];
    y[i] = s;
  }
  return y;
}

IntMatrix ones(int n) {
  IntMatrix x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = 1;
  return x;
}

}  // namespace

TEST_CASE("integer helpers") {
  CHECK(to_string(Int128(0)) == "0");
  CHECK(to_string(-Int128(1234567)) == "-1234567");
  const Int128 big = Int128(1) << 100;
  CHECK(to_string(big) == "1267650600228229401496703205376");
  CHECK(IntMatrix::identity(3) * ones(3) == ones(3));
  CHECK(IntMatrix(2, 2).is_binary());
}

TEST_CASE("gadget A") {
  const GadgetA z = build_gadget_A(IntMatrix(3, 3));
  CHECK(z.a.rows() == 8);
  CHECK(z.cube_entry == 0);

  const GadgetA o = build_gadget_A(ones(2));
  CHECK(o.cube_entry == 4);
  CHECK(o.a == o.a.transpose());

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const IntMatrix x = random_binary(6, 0.4, seed);
    const GadgetA g = build_gadget_A(x);
    Int128 s = 0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) s += x(i, j);
    CHECK(g.cube_entry == s);
    CHECK(walks3(g.a, 0, 13) == s);
  }
  IntMatrix bad(2, 2);
  bad(0, 1) = 2;
  CHECK_THROWS_AS(build_gadget_A(bad), std::invalid_argument);
}

TEST_CASE("block B") {
  const BlockB zero = build_block_B(IntMatrix(3, 3));
  CHECK(zero.b == IntMatrix::identity(12));
  CHECK(zero.corner == 0);

  IntMatrix one(1, 1);
  one(0, 0) = 1;
  const BlockB b1 = build_block_B(one);
  CHECK(b1.b.rows() == 4);
  CHECK(b1.corner == -1);

  // Composition with the gadget: the corner counts -sum X.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const IntMatrix x = random_binary(5, 0.5, seed);
    const GadgetA g = build_gadget_A(x);
    const BlockB b = build_block_B(g.a);
    CHECK(b.corner == -g.entry_sum);
    const std::vector<Int128> col = last_column(b.b);
    for (int i = 0; i < b.b.rows(); ++i) CHECK(col[i] == b.inverse(i, b.b.cols() - 1));
  }

  // Arbitrary integer A.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-3, 3);
  IntMatrix a(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = d(rng);
  const BlockB ba = build_block_B(a);
  for (int i = 0; i < 16; ++i) CHECK(ba.b(i, i) == 1);
  CHECK(ba.b * ba.inverse == IntMatrix::identity(16));
}

TEST_CASE("last column norm of the directed gadget") {
  const ColumnNorm z = last_column_norm(IntMatrix(2, 2));
  CHECK(z.exact == 3);
  CHECK(z.formula == 3);
  const ColumnNorm o = last_column_norm(ones(2));
  CHECK(o.exact == 27);

  // Back substitution oracle.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const IntMatrix x = random_binary(7, 0.3, seed);
    const IntMatrix a = gadget_matrix(x, true);
    IntMatrix b = IntMatrix::identity(4 * a.rows());
    for (int blk = 0; blk < 3; ++blk)
      for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.rows(); ++j) b(blk * a.rows() + i, (blk + 1) * a.rows() + j) = a(i, j);
    Int128 norm2 = 0;
    for (Int128 v : last_column(b)) norm2 += v * v;
    CHECK(last_column_norm(x).exact == norm2);
  }

  // Near-balanced instances: the squared norm grows like n^2.
  for (int n : {5, 10, 20, 32}) {
    IntMatrix x(n, n);
    for (int k = 0; k < n / 2; ++k) x(k % n, (3 * k) % n) = 1;
    const ColumnNorm c = last_column_norm(x);
    const Int128 n2 = Int128(n) * n;
    CHECK(4 * c.exact >= n2);
    CHECK(c.exact <= n2);
  }
}

TEST_CASE("identity table") {
  const auto rows = gadget_identities(random_binary(16, 0.5, 99));
  CHECK(rows.size() == 6);
  for (const auto& r : rows) CHECK_MESSAGE(r.pass, r.name);
}
