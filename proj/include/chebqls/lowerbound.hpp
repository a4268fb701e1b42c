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
#include <string>
#include <vector>

namespace chebqls {

__extension__ typedef __int128 Int128;
__extension__ typedef unsigned __int128 UInt128;

std::string to_string(Int128 v);

// Dense row-major integer matrix with 128-bit entries.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols);
  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Int128& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  Int128 operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  IntMatrix transpose() const;
  bool is_binary() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Int128> data_;
};

// n x n 0/1 matrix with independent Bernoulli(density) entries.
IntMatrix random_binary(int n, double density, std::uint64_t seed);

// Vertex order: apex 0, left set 1..n, right set n+1..2n, apex 2n+1.
// Undirected: apex-left, left-right (X), right-apex edges, symmetric.
// Directed: edges oriented apex -> left -> right -> apex.
IntMatrix gadget_matrix(const IntMatrix& x, bool directed = false);

struct GadgetA {
  IntMatrix a;
  Int128 cube_entry = 0;  // (A^3)_{first, last}
  Int128 entry_sum = 0;   // sum_{ij} X_ij
};

// Builds the undirected gadget and checks (A^3)_{1,2n+2} = sum X together
// with the symmetry and degree structure. Throws std::invalid_argument for
// a non-square or non-0/1 X and std::logic_error if an identity fails.
GadgetA build_gadget_A(const IntMatrix& x);

// Closed-form inverse [[I, -A, A^2, -A^3], [0, I, -A, A^2], [0, 0, I, -A], [0, 0, 0, I]].
IntMatrix block_B_inverse(const IntMatrix& a);

struct BlockB {
  IntMatrix b;
  IntMatrix inverse;        // closed form, verified by B * inverse = I
  Int128 corner = 0;        // (B^{-1})_{1, 4m}
  Int128 cube_entry = 0;    // (A^3)_{1, m}
};

// B = I + superdiagonal blocks A (4m x 4m for an m x m A). Throws
// std::invalid_argument for a non-square A and std::logic_error if
// B * inverse != I or corner != -cube_entry.
BlockB build_block_B(const IntMatrix& a);

struct ColumnNorm {
  Int128 exact = 0;    // ||B^{-1} e_last||^2 from the inverse column
  Int128 formula = 0;  // (sum X)^2 + sum_i (row sum_i)^2 + n + 1
};

// Squared norm of the last column of B^{-1} for the directed gadget of X.
// Throws std::logic_error if exact != formula.
ColumnNorm last_column_norm(const IntMatrix& x);

struct IdentityCheck {
  std::string name;
  std::string lhs;
  std::string rhs;
  bool pass = false;
};

// All gadget identities for one X, without throwing on mismatch.
std::vector<IdentityCheck> gadget_identities(const IntMatrix& x);

}  // namespace chebqls
