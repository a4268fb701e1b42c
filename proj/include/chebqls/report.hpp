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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "chebqls/approx_family.hpp"

namespace chebqls {

struct SweepConfig {
  std::vector<double> kappas;
  std::vector<int> degrees;  // odd polynomial degrees
  std::vector<double> epsilons;
  std::vector<Family> families;
  int grid = 0;              // points per interval; <= 0 picks default_grid_size
  std::uint64_t seed = 1;
  int threads = 0;           // <= 0 uses hardware concurrency
  bool filter_unit_error = false;  // drop rows with error_notion1 > 1

  // Throws std::invalid_argument on empty lists or even degrees.
  void validate_sweep() const;
  void validate_table() const;
};

// Shortest decimal that round-trips (at most 17 significant digits); the
// same double always prints the same bytes.
std::string format_double(double v);

// Runs fn(0..count-1) on a pool of `threads` workers (<= 0: hardware).
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

struct DegreeRow {
  double kappa = 0.0;
  double epsilon = 0.0;
  int cks_degree = 0;
  int chebiter_degree = 0;
};

// Degrees under the published table convention for every (kappa, epsilon).
std::vector<DegreeRow> table_degrees(const SweepConfig& cfg);
void write_degrees_csv(std::ostream& out, const std::vector<DegreeRow>& rows);

struct SweepRow {
  Family family = Family::chebyshev_iteration;
  double kappa = 0.0;
  int t = 0;       // iteration count; for CKS the gradient-descent order that was truncated
  int degree = 0;
  ErrorReport err;
};

struct SlopeFit {
  Family family = Family::chebyshev_iteration;
  double kappa = 0.0;
  double slope = 0.0;  // least-squares d ln(residual) / d degree
  int points = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SlopeFit> slopes;
  // slope(chebiter) / slope(cks) per kappa, when both families were swept.
  std::vector<std::pair<double, double>> slope_ratios;
};

// The truncated CKS polynomial of a given odd degree: gd_poly(t) cut after
// T_degree, with t chosen to minimize the measured residual.
struct CksAtDegree {
  int t = 0;
  ChebSeries series;
};
CksAtDegree cks_at_degree(double kappa, int degree);

// Residual and error of every (family, kappa, degree); rows with a residual
// below 1e-13 are kept in the CSV but excluded from the slope fits.
SweepResult error_sweep(const SweepConfig& cfg);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct BenchRow {
  int t = 0;
  double fast_seconds = 0.0;
  double recurrence_seconds = 0.0;
  double rel_diff = 0.0;  // ||fast - recurrence||_2 / ||recurrence||_2
};

struct BenchResult {
  std::vector<BenchRow> rows;
  // time(t_{i+1}) / time(t_i) for consecutive list entries.
  std::vector<double> fast_ratios;
  std::vector<double> recurrence_ratios;
};

// Minimum over repetitions of the wall time of both coefficient paths.
// Throws std::logic_error if the paths disagree beyond 1e-9 and
// std::invalid_argument for t outside [1, 2^16].
BenchResult bench_coeffs(const std::vector<int>& ts, double kappa, double min_seconds = 0.05);
void write_bench_csv(std::ostream& out, const BenchResult& r);

struct ClaimResult {
  std::string claim;
  bool pass = false;
  std::string detail;
};

// Reduced versions of every module's invariants at fixed seeds. With
// inject_fault the norm-bound check receives a corrupted coefficient vector.
std::vector<ClaimResult> verify_all(std::uint64_t seed, bool inject_fault = false);
void write_claims(std::ostream& out, const std::vector<ClaimResult>& claims);

}  // namespace chebqls
