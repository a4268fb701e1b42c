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

#include <vector>

#include "chebqls/cheb_core.hpp"
#include "chebqls/iterative_solvers.hpp"

namespace chebqls {

// Dense simulation of block-encodings. Basis index layout: ancilla registers
// are the most significant digits, index = ancilla_state * n + system_index,
// so the "all ancillas zero" subspace is the first n coordinates. With a
// counter register on top of one ancilla: index = (counter * 2 + anc) * n + sys.
struct BlockEncoding {
  CMatrix unitary;
  int ancillas = 1;
  double mu = 1.0;
  int n = 0;
  long query_count = 1;      // U_A / U_A^H applications on the deepest branch
  long controlled_calls = 0; // controlled U_A / U_A^H uses in the whole circuit

  CMatrix top_left() const { return unitary.topLeftCorner(n, n); }
  CMatrix encoded() const { return mu * top_left(); }
  // max |U^H U - I| entrywise.
  double unitarity_error() const;
};

// Largest dense dimension lcu_apply will materialize.
inline constexpr int kMaxCircuitDim = 4096;

// One-ancilla dilation [[A, S], [S, -A]], S = sqrt(I - A^2), from the
// eigendecomposition of A with 1 - l^2 clamped to [0, 1]. Throws
// std::invalid_argument if ||A|| > 1 + 1e-12.
BlockEncoding dilate(const DenseHermitian& a);

// W = R U^H R U with R = 2 Pi - I reflecting about the ancilla-zero subspace.
CMatrix w_operator(const BlockEncoding& be);

// U_A W^k encoding T_t(A) for odd t = 2k + 1. Throws std::invalid_argument
// for even or non-positive t.
BlockEncoding chebyshev_block(const BlockEncoding& be, int t);

// Phases (1 - t) pi / 2, pi / 2, ..., pi / 2 selecting T_t.
std::vector<double> chebyshev_phases(int t);

// Top-left n x n block of 1/2 (U_Phi + U_{-Phi}) for the phased alternating
// sequence. Odd length d: e^{i p1 R} U prod_j (e^{i p_2j R} U^H e^{i p_2j+1 R} U);
// even length: prod_j (e^{i p_2j-1 R} U^H e^{i p_2j R} U).
CMatrix qsvt_sequence(const BlockEncoding& be, const std::vector<double>& phases);

// LCU block-encoding of sum_i c_i T_{2i+1}(A) / ||c||_1 for an odd series c,
// built from a single-ancilla encoding with a counter of ceil(log2 t) + 1
// qubits driving controlled W^(2^j), then U_A. State preparation uses
// Householder reflections with first columns sqrt(|c_i| / ||c||_1) (right)
// and sign(c_i) sqrt(|c_i| / ||c||_1) (left). Throws std::invalid_argument
// for a zero or non-odd series and std::length_error beyond kMaxCircuitDim.
BlockEncoding lcu_apply(const BlockEncoding& be, const ChebSeries& c);

// The same circuit applied to |0...0>|b> without forming the full unitary.
CVector lcu_apply_state(const BlockEncoding& be, const ChebSeries& c, const CVector& b);

struct QlsOutput {
  CVector state;          // full output state over (counter, ancilla, system)
  CVector x;              // normalized flag-0 system state
  double alpha = 0.0;     // norm of the flag-0 branch
  double residual = 0.0;  // || A x / ||A x|| - b ||
  double mu = 0.0;        // ||c||_1
  long query_count = 0;
};

// Runs the LCU circuit for q_t (kappa) on |0...0>|b>. b must be a unit vector.
QlsOutput solve_qls(const BlockEncoding& be, const CVector& b, int t, double kappa);

}  // namespace chebqls
