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

#include <Eigen/Dense>

namespace chebqls {

struct MinimaxSolution {
  double error = 0.0;           // min over a of max_k |(basis a)_k - target_k|
  std::vector<double> weights;  // the minimizing a
  int iterations = 0;
};

// Discrete Chebyshev (L-infinity) fit: minimizes max_k |sum_j basis(k,j) a_j
// - target_k| over real a. Solved as a linear program through its dual
//   max target.(v - u)  s.t.  basis^T (u - v) = 0,  sum(u + v) = 1,  u, v >= 0
// with a two-phase revised simplex (largest reduced cost, falling back to
// Bland's rule on degenerate stalls). Throws std::runtime_error if the
// simplex fails to terminate.
MinimaxSolution discrete_minimax(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target);

}  // namespace chebqls
