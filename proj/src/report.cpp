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

#include "chebqls/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "chebqls/blockenc_sim.hpp"
#include "chebqls/iterative_solvers.hpp"
#include "chebqls/lowerbound.hpp"
#include "chebqls/special_funcs.hpp"

namespace chebqls {
namespace {

constexpr int kSearchGrid = 512;
constexpr double kFitFloor = 1e-13;

double rel2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0, y = i < b.size() ? b[i] : 0.0;
    num += (x - y) * (x - y);
    den += y * y;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double cks_residual(const ChebSeries& full, int keep, double kappa, int grid) {
  ChebSeries cut(std::vector<double>(full.coeffs.begin(), full.coeffs.begin() + std::min<std::size_t>(keep, full.size())),
                 Parity::odd);
  return residual_error(cut, kappa, grid).residual_notion2;
}

template <typename F>
double min_time(F&& fn, double min_seconds) {
  using clock = std::chrono::steady_clock;
  double best = std::numeric_limits<double>::infinity(), total = 0.0;
  for (int runs = 0; (total < min_seconds || runs < 3) && runs < 100000; ++runs) {
    const auto t0 = clock::now();
    fn();
    const double dt = std::chrono::duration<double>(clock::now() - t0).count();
    best = std::min(best, dt);
    total += dt;
  }
  return best;
}

ClaimResult run_claim(const std::string& name, const std::function<std::string(bool&)>& body) {
  ClaimResult r{name, false, ""};
  try {
    bool ok = true;
    r.detail = body(ok);
    r.pass = ok;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

CMatrix spectral(const CMatrix& a, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  Eigen::VectorXcd fl(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) fl(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

void SweepConfig::validate_sweep() const {
  if (kappas.empty()) throw std::invalid_argument("sweep needs at least one kappa");
  if (degrees.empty()) throw std::invalid_argument("sweep needs at least one degree");
  if (families.empty()) throw std::invalid_argument("sweep needs at least one family");
  for (double k : kappas)
    if (!(k > 1.0)) throw std::invalid_argument("kappa must be > 1");
  for (int d : degrees)
    if (d < 1 || d % 2 == 0) throw std::invalid_argument("degrees must be odd and positive, got " + std::to_string(d));
}

void SweepConfig::validate_table() const {
  if (kappas.empty()) throw std::invalid_argument("table needs at least one kappa");
  if (epsilons.empty()) throw std::invalid_argument("table needs at least one epsilon");
  for (double k : kappas)
    if (!(k > 1.0)) throw std::invalid_argument("kappa must be > 1");
  for (double e : epsilons)
    if (!(e > 0.0)) throw std::invalid_argument("epsilon must be > 0");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, count);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

std::vector<DegreeRow> table_degrees(const SweepConfig& cfg) {
  cfg.validate_table();
  std::vector<DegreeRow> rows;
  for (double k : cfg.kappas)
    for (double e : cfg.epsilons)
      rows.push_back({k, e, min_degree(Family::cks_truncated, k, e, DegreeMode::table),
                      min_degree(Family::chebyshev_iteration, k, e, DegreeMode::table)});
  return rows;
}

void write_degrees_csv(std::ostream& out, const std::vector<DegreeRow>& rows) {
  out << "kappa,epsilon,cks_degree,chebiter_degree\n";
  for (const auto& r : rows)
    out << format_double(r.kappa) << ',' << format_double(r.epsilon) << ',' << r.cks_degree << ',' << r.chebiter_degree << '\n';
}

CksAtDegree cks_at_degree(double kappa, int degree) {
  if (degree < 1 || degree % 2 == 0) throw std::invalid_argument("degree must be odd and positive");
  if (!(kappa > 1.0)) throw std::invalid_argument("kappa must be > 1");
  const int keep = (degree + 1) / 2;
  // Below t = keep nothing is truncated and the residual (1 - x^2)^t only
  // shrinks with t, so the search starts there.
  const int t_lo = keep;
  const int t_hi = std::max(t_lo + 1, static_cast<int>(std::ceil(8.0 * keep * kappa)));
  std::map<int, double> cache;
  auto score = [&](int t) {
    auto it = cache.find(t);
    if (it != cache.end()) return it->second;
    const double r = cks_residual(gd_poly(t), keep, kappa, kSearchGrid);
    cache.emplace(t, r);
    return r;
  };
  std::vector<int> grid{t_lo};
  while (grid.back() < t_hi) grid.push_back(std::min(t_hi, std::max(grid.back() + 1, static_cast<int>(grid.back() * 1.15))));
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (score(grid[i]) < score(grid[best])) best = i;
  // Integer ternary search inside the bracketing grid cells.
  int lo = grid[best > 0 ? best - 1 : 0], hi = grid[std::min(best + 1, grid.size() - 1)];
  while (hi - lo > 2) {
    const int m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (score(m1) <= score(m2)) hi = m2; else lo = m1;
  }
  int t_best = grid[best];
  for (int t = lo; t <= hi; ++t)
    if (score(t) < score(t_best)) t_best = t;
  const ChebSeries full = gd_poly(t_best);
  CksAtDegree out;
  out.t = t_best;
  out.series = ChebSeries(std::vector<double>(full.coeffs.begin(), full.coeffs.begin() + std::min<std::size_t>(keep, full.size())),
                          Parity::odd);
  return out;
}

SweepResult error_sweep(const SweepConfig& cfg) {
  cfg.validate_sweep();
  struct Task {
    Family family;
    double kappa;
    int degree;
  };
  std::vector<Task> tasks;
  for (Family f : cfg.families)
    for (double k : cfg.kappas)
      for (int d : cfg.degrees) tasks.push_back({f, k, d});
  std::vector<SweepRow> rows(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), cfg.threads, [&](int i) {
    const Task& task = tasks[i];
    SweepRow row;
    row.family = task.family;
    row.kappa = task.kappa;
    row.degree = task.degree;
    ChebSeries s;
    switch (task.family) {
      case Family::chebyshev_iteration:
        row.t = (task.degree + 1) / 2;
        s = chebiter_coeffs(row.t, task.kappa);
        break;
      case Family::gradient_descent:
        row.t = (task.degree + 1) / 2;
        s = gd_poly(row.t);
        break;
      case Family::cks_truncated: {
        CksAtDegree c = cks_at_degree(task.kappa, task.degree);
        row.t = c.t;
        s = std::move(c.series);
        break;
      }
    }
    row.err = residual_error(s, task.kappa, cfg.grid);
    rows[i] = row;
  });

  SweepResult out;
  for (auto& r : rows)
    if (!cfg.filter_unit_error || r.err.error_notion1 <= 1.0) out.rows.push_back(r);

  std::map<std::pair<int, double>, std::vector<std::pair<double, double>>> pts;
  for (const auto& r : out.rows)
    if (r.err.residual_notion2 > kFitFloor && std::isfinite(r.err.residual_notion2))
      pts[{static_cast<int>(r.family), r.kappa}].push_back({static_cast<double>(r.degree), std::log(r.err.residual_notion2)});
  std::map<std::pair<int, double>, double> slope_of;
  for (const auto& [key, p] : pts) {
    if (p.size() < 2) continue;
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : p) {
      mx += x;
      my += y;
    }
    mx /= p.size();
    my /= p.size();
    double sxy = 0.0, sxx = 0.0;
    for (auto [x, y] : p) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    if (sxx == 0.0) continue;
    const double slope = sxy / sxx;
    out.slopes.push_back({static_cast<Family>(key.first), key.second, slope, static_cast<int>(p.size())});
    slope_of[key] = slope;
  }
  for (double k : cfg.kappas) {
    auto a = slope_of.find({static_cast<int>(Family::chebyshev_iteration), k});
    auto b = slope_of.find({static_cast<int>(Family::cks_truncated), k});
    if (a != slope_of.end() && b != slope_of.end() && b->second != 0.0) out.slope_ratios.push_back({k, a->second / b->second});
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "family,kappa,t,degree,coeff_norm,residual_notion2,error_notion1,supnorm_full\n";
  for (const auto& r : rows)
    out << to_string(r.family) << ',' << format_double(r.kappa) << ',' << r.t << ',' << r.degree << ','
        << format_double(r.err.coeff_norm) << ',' << format_double(r.err.residual_notion2) << ','
        << format_double(r.err.error_notion1) << ',' << format_double(r.err.supnorm_full) << '\n';
}

BenchResult bench_coeffs(const std::vector<int>& ts, double kappa, double min_seconds) {
  if (ts.empty()) throw std::invalid_argument("bench needs at least one t");
  BenchResult out;
  for (int t : ts) {
    if (t < 1 || t > (1 << 16)) throw std::invalid_argument("t must be in [1, 65536]");
    BenchRow row;
    row.t = t;
    ChebSeries fast, rec;
    row.fast_seconds = min_time([&] { fast = chebiter_coeffs(t, kappa, CoeffPath::fast); }, min_seconds);
    row.recurrence_seconds = min_time([&] { rec = chebiter_coeffs(t, kappa, CoeffPath::recurrence); }, min_seconds);
    row.rel_diff = rel2(fast.coeffs, rec.coeffs);
    if (!(row.rel_diff <= 1e-9))
      throw std::logic_error("coefficient paths disagree at t = " + std::to_string(t) + " (" + format_double(row.rel_diff) + ")");
    out.rows.push_back(row);
  }
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    out.fast_ratios.push_back(out.rows[i].fast_seconds / out.rows[i - 1].fast_seconds);
    out.recurrence_ratios.push_back(out.rows[i].recurrence_seconds / out.rows[i - 1].recurrence_seconds);
  }
  return out;
}

void write_bench_csv(std::ostream& out, const BenchResult& r) {
  out << "t,fast_seconds,recurrence_seconds,rel_diff\n";
  for (const auto& row : r.rows)
    out << row.t << ',' << format_double(row.fast_seconds) << ',' << format_double(row.recurrence_seconds) << ','
        << format_double(row.rel_diff) << '\n';
}

std::vector<ClaimResult> verify_all(std::uint64_t seed, bool inject_fault) {
  std::vector<ClaimResult> claims;

  claims.push_back(run_claim("chebiter residual equals 1/T_t(s(0))", [](bool& ok) {
    double worst = 0.0;
    for (double kappa : {2.0, 8.0})
      for (int t = 1; t <= 24; ++t) {
        const double closed = std::exp(-log_cheb_at_s0(t, kappa * kappa));
        double prod = 0.0;
        for (double x : cheb_grid(1.0 / kappa, 1.0, default_grid_size(2 * t - 1)))
          prod = std::max(prod, std::abs(qt_residual_product(t, kappa, x)));
        worst = std::max(worst, std::abs(prod - closed) / closed);
        if (closed >= 1e-6) {
          const double series = residual_error(chebiter_coeffs(t, kappa), kappa).residual_notion2;
          worst = std::max(worst, std::abs(series - closed) / closed);
        }
      }
    ok = worst <= 1e-8;
    return "max relative deviation " + format_double(worst);
  }));

  claims.push_back(run_claim("coefficient 1-norm <= 2 (1 + 1/T_t(s(0))) t", [inject_fault](bool& ok) {
    const double kappa = 10.0;
    int failures = 0, checked = 0;
    chebiter_sweep(300, kappa, [&](int t, const ChebSeries& c) {
      double norm = c.coeff_norm();
      if (inject_fault && t == 150) norm += 10.0 * t;  // corrupted coefficient vector
      const double bound = 2.0 * (1.0 + std::exp(-log_cheb_at_s0(t, kappa * kappa))) * t;
      ++checked;
      if (norm > bound) ++failures;
      return true;
    });
    ok = failures == 0;
    return std::to_string(failures) + " of " + std::to_string(checked) + " degrees exceed the bound";
  }));

  claims.push_back(run_claim("comparison table degrees", [](bool& ok) {
    const double kappas[] = {2, 10, 100, 1000};
    const double eps[] = {0.5, 1e-2, 1e-4, 1e-6};
    const int cks[4][4] = {{15, 33, 53, 71}, {115, 203, 301, 399}, {1819, 2687, 3669, 4633}, {24913, 33515, 43337, 52989}};
    const int ci[4][4] = {{7, 15, 25, 33}, {61, 101, 147, 193}, {1061, 1453, 1913, 2373}, {15203, 19115, 23721, 28327}};
    int mismatches = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (min_degree(Family::cks_truncated, kappas[i], eps[j], DegreeMode::table) != cks[i][j]) ++mismatches;
        if (min_degree(Family::chebyshev_iteration, kappas[i], eps[j], DegreeMode::table) != ci[i][j]) ++mismatches;
      }
    ok = mismatches == 0;
    return std::to_string(32 - mismatches) + " of 32 entries match";
  }));

  claims.push_back(run_claim("chebiter residual below truncated CKS at equal degree", [](bool& ok) {
    const double kappa = 16.0;
    std::ostringstream d;
    ok = true;
    for (int degree : {15, 31, 63}) {
      const double rc = residual_error(chebiter_coeffs((degree + 1) / 2, kappa), kappa).residual_notion2;
      const double rk = residual_error(cks_at_degree(kappa, degree).series, kappa).residual_notion2;
      ok = ok && rc < rk;
      d << (degree == 15 ? "" : "; ") << "d=" << degree << ": " << format_double(rc) << " vs " << format_double(rk);
    }
    return d.str();
  }));

  claims.push_back(run_claim("W-form, QSVT, LCU and spectral blocks agree", [seed](bool& ok) {
    const double kappa = 4.0;
    const DenseHermitian a = DenseHermitian::random_indefinite(4, kappa, seed);
    const BlockEncoding be = dilate(a);
    double worst = 0.0;
    for (int t : {1, 7, 15}) {
      const CMatrix w = chebyshev_block(be, t).top_left();
      const CMatrix q = qsvt_sequence(be, chebyshev_phases(t));
      const CMatrix s = spectral(a.matrix(), [t](double x) { return std::cos(t * std::acos(std::clamp(x, -1.0, 1.0))); });
      worst = std::max({worst, (w - q).cwiseAbs().maxCoeff(), (w - s).cwiseAbs().maxCoeff()});
    }
    const ChebSeries c = chebiter_coeffs(3, kappa);
    const BlockEncoding lcu = lcu_apply(be, c);
    const CMatrix want = spectral(a.matrix(), [&](double x) { return qt_eval(3, kappa, x); }) / c.coeff_norm();
    worst = std::max(worst, (lcu.top_left() - want).cwiseAbs().maxCoeff());
    ok = worst <= 1e-9 && lcu.query_count == 5;
    return "max deviation " + format_double(worst) + ", q_3 query count " + std::to_string(lcu.query_count);
  }));

  claims.push_back(run_claim("q_t is the minimax residual polynomial", [](bool& ok) {
    ok = true;
    std::ostringstream d;
    for (int t = 1; t <= 4; ++t) {
      const OptimalityReport r = optimality_check(t, 2.0);
      ok = ok && r.ok();
      d << (t == 1 ? "" : "; ") << "t=" << t << (r.ok() ? " ok" : " FAIL");
    }
    return d.str();
  }));

  claims.push_back(run_claim("special-function coefficient norms", [](bool& ok) {
    ok = true;
    double worst = 0.0;
    for (int kappa = 2; kappa <= 16; ++kappa) {
      const ErfNorm n = erf_coeff_norm(kappa, kappa * kappa);
      worst = std::max(worst, n.full_norm / n.full_bound);
    }
    ok = worst <= 1.0 && monomial_cheb(31).coeff_norm() <= 1.0 + 1e-12 && exp_cheb(5.0, 40).coeff_norm() <= 1.0 + 1e-12;
    return "max erf norm / bound " + format_double(worst);
  }));

  claims.push_back(run_claim("fast coefficients match the recurrence", [](bool& ok) {
    const ChebSeries a = chebiter_coeffs(512, 64.0, CoeffPath::fast);
    const ChebSeries b = chebiter_coeffs(512, 64.0, CoeffPath::recurrence);
    const double d = rel2(a.coeffs, b.coeffs);
    ok = d <= 1e-9;
    return "relative 2-norm difference " + format_double(d);
  }));

  claims.push_back(run_claim("lower-bound gadget identities", [seed](bool& ok) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> nd(1, 16);
    std::uniform_real_distribution<double> dens(0.0, 1.0);
    int failures = 0;
    for (int i = 0; i < 20; ++i)
      for (const auto& row : gadget_identities(random_binary(nd(rng), dens(rng), rng())))
        if (!row.pass) ++failures;
    ok = failures == 0;
    return std::to_string(failures) + " failed identities over 20 instances";
  }));

  claims.push_back(run_claim("q_t^+ blow-up and momentum norm", [](bool& ok) {
    for (int t = 1; t <= 200; ++t) qtplus_blowup_log(t, 10.0);
    std::vector<double> grid;
    for (int i = 0; i <= 2000; ++i) grid.push_back(-1.0 + i / 1000.0);
    double least = std::numeric_limits<double>::infinity();
    for (double kappa : {9.0, 25.0, 100.0, 1e4}) least = std::min(least, momentum_matrix_norm(kappa, grid));
    ok = least >= std::sqrt(2.0);
    return "smallest momentum norm " + format_double(least);
  }));

  return claims;
}

void write_claims(std::ostream& out, const std::vector<ClaimResult>& claims) {
  std::size_t width = 5;
  for (const auto& c : claims) width = std::max(width, c.claim.size());
  for (const auto& c : claims) {
    out << (c.pass ? "PASS  " : "FAIL  ") << c.claim << std::string(width - c.claim.size() + 2, ' ') << c.detail << '\n';
  }
}

}  // namespace chebqls
