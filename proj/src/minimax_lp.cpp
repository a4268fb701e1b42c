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

#include "chebqls/minimax_lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace chebqls {
namespace {

// Revised simplex for max c.x subject to A x = b, x >= 0, b >= 0. The basis
// matrix is refactored every iteration, so rounding does not accumulate the
// way it does in an updated tableau. Artificial columns occupy indices
// [n, n + m) and are never allowed to re-enter in phase two.
class RevisedSimplex {
 public:
  RevisedSimplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
      : m_(static_cast<int>(a.rows())), n_(static_cast<int>(a.cols())), a_(m_, n_ + m_), b_(b),
        basis_(m_) {
    a_.leftCols(n_) = a;
    a_.rightCols(m_).setIdentity();
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  // Installs a feasible structural basis, skipping phase one.
  void set_basis(const std::vector<int>& cols) { basis_ = cols; }

  // Minimizes the sum of artificials; returns the optimal sum.
  double phase_one(int& iterations) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n_ + m_);
    c.tail(m_).setConstant(-1.0);
    run(c, n_ + m_, iterations, -1e-12);
    return -objective(c);
  }

  void phase_two(const Eigen::VectorXd& c_struct, int& iterations) {
    // Swap zero-level artificials for structural columns so that they cannot
    // turn positive while phase two moves along an edge.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(m_);
      unit(i) = 1.0;
      const Eigen::VectorXd row = basis_matrix().transpose().partialPivLu().solve(unit);
      for (int j = 0; j < n_; ++j) {
        bool used = false;
        for (int bj : basis_) used = used || bj == j;
        if (!used && std::abs(row.dot(a_.col(j))) > kPivotTol) {
          basis_[i] = j;
          break;
        }
      }
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n_ + m_);
    c.head(n_) = c_struct;
    run(c, n_, iterations);
    c_ = c;
  }

  double objective(const Eigen::VectorXd& c) const {
    const Eigen::VectorXd xb = lu().solve(b_);
    double z = 0.0;
    for (int i = 0; i < m_; ++i) z += c(basis_[i]) * xb(i);
    return z;
  }
  double objective() const { return objective(c_); }

  // y with B^T y = c_B.
  Eigen::VectorXd duals() const { return duals(c_); }

 private:
  static constexpr double kCostTol = 1e-12;
  static constexpr double kPivotTol = 1e-10;
  static constexpr int kMaxIterations = 200000;
  // Switch from the largest-coefficient rule to Bland's rule, for the rest
  // of the phase, after this many consecutive degenerate pivots.
  static constexpr int kDegenerateLimit = 50;

  Eigen::MatrixXd basis_matrix() const {
    Eigen::MatrixXd bm(m_, m_);
    for (int i = 0; i < m_; ++i) bm.col(i) = a_.col(basis_[i]);
    return bm;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu() const { return basis_matrix().partialPivLu(); }

  Eigen::VectorXd duals(const Eigen::VectorXd& c) const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb(i) = c(basis_[i]);
    return basis_matrix().transpose().partialPivLu().solve(cb);
  }

  // Stops at optimality, or once the objective reaches `stop_at`.
  void run(const Eigen::VectorXd& c, int allowed_cols, int& iterations,
           double stop_at = std::numeric_limits<double>::infinity()) {
    int degenerate = 0;
    bool bland = false;
    std::vector<char> in_basis(static_cast<std::size_t>(n_ + m_), 0);
    while (true) {
      std::fill(in_basis.begin(), in_basis.end(), 0);
      for (int j : basis_) in_basis[j] = 1;
      const auto fact = lu();
      const Eigen::VectorXd xb = fact.solve(b_);
      double z = 0.0;
      for (int i = 0; i < m_; ++i) z += c(basis_[i]) * xb(i);
      if (z >= stop_at) return;
      const Eigen::VectorXd y = duals(c);
      const Eigen::VectorXd reduced = c.head(allowed_cols) - a_.leftCols(allowed_cols).transpose() * y;
      bland = bland || degenerate >= kDegenerateLimit;
      int col = -1;
      double best = kCostTol;
      for (int j = 0; j < allowed_cols; ++j) {
        if (in_basis[j] || reduced(j) <= kCostTol) continue;
        if (bland) {
          col = j;
          break;
        }
        if (reduced(j) > best) {
          best = reduced(j);
          col = j;
        }
      }
      if (col < 0) return;
      const Eigen::VectorXd w = fact.solve(a_.col(col));
      int row = -1;
      double ratio_best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (w(i) <= kPivotTol) continue;
        const double ratio = std::max(xb(i), 0.0) / w(i);
        if (ratio < ratio_best - 1e-15 ||
            (ratio <= ratio_best + 1e-15 && row >= 0 && basis_[i] < basis_[row])) {
          ratio_best = ratio;
          row = i;
        }
      }
      if (row < 0) throw std::runtime_error("discrete_minimax: unbounded linear program");
      degenerate = ratio_best <= 1e-12 ? degenerate + 1 : 0;
      basis_[row] = col;
      if (++iterations > kMaxIterations)
        throw std::runtime_error("discrete_minimax: simplex iteration limit reached");
    }
  }

  int m_;
  int n_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::VectorXd c_;
  std::vector<int> basis_;
};

}  // namespace

MinimaxSolution discrete_minimax(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target) {
  const int k = static_cast<int>(basis.rows());
  const int j = static_cast<int>(basis.cols());
  if (k == 0 || j == 0 || target.size() != k)
    throw std::invalid_argument("discrete_minimax: shape mismatch");

  // Dual variables: u_k (columns [0, k)) and v_k (columns [k, 2k)).
  Eigen::MatrixXd a(j + 1, 2 * k);
  a.topLeftCorner(j, k) = basis.transpose();
  a.topRightCorner(j, k) = -basis.transpose();
  a.row(j).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(j + 1);
  b(j) = 1.0;
  Eigen::VectorXd c(2 * k);
  c.head(k) = -target;
  c.tail(k) = target;

  MinimaxSolution out;
  RevisedSimplex lp(a, b);
  // Start from a reference of j + 1 spread-out points: the null vector w of
  // their basis rows, scaled to sum |w| = 1, is a basic feasible point with
  // u_k = max(w_k, 0), v_k = max(-w_k, 0). For a Haar system no w_k vanishes,
  // which keeps the iteration away from the degenerate origin of phase one.
  bool started = false;
  if (k > j) {
    std::vector<int> ref(static_cast<std::size_t>(j) + 1);
    for (int i = 0; i <= j; ++i) ref[i] = static_cast<int>(std::lround(static_cast<double>(i) * (k - 1) / j));
    Eigen::MatrixXd rows(j, j);
    for (int i = 0; i < j; ++i) rows.col(i) = basis.row(ref[i + 1]).transpose();
    Eigen::VectorXd w(j + 1);
    w(0) = 1.0;
    w.tail(j) = rows.fullPivLu().solve(-basis.row(ref[0]).transpose());
    const double scale = w.cwiseAbs().sum();
    if (std::isfinite(scale) && w.cwiseAbs().minCoeff() > 0.0) {
      std::vector<int> cols(static_cast<std::size_t>(j) + 1);
      for (int i = 0; i <= j; ++i) cols[i] = w(i) > 0 ? ref[i] : k + ref[i];
      lp.set_basis(cols);
      started = true;
    }
  }
  if (!started && lp.phase_one(out.iterations) > 1e-9)
    throw std::runtime_error("discrete_minimax: infeasible dual");
  lp.phase_two(c, out.iterations);

  // Complementary slackness: y = (-a, h) solves the primal.
  const Eigen::VectorXd y = lp.duals();
  out.error = lp.objective();
  out.weights.resize(j);
  for (int i = 0; i < j; ++i) out.weights[i] = -y(i);
  return out;
}

}  // namespace chebqls
