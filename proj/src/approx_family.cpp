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

#include "chebqls/approx_family.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "chebqls/minimax_lp.hpp"

namespace chebqls {
namespace {

void require_params(int t, double kappa) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  if (!(kappa > 1.0)) throw std::invalid_argument("kappa must be > 1");
}

// s_c(y) - 1 = 2 (1 - c y) / (c - 1), formed without cancellation.
double s_excess(double c, double y) { return 2.0 * (1.0 - c * y) / (c - 1.0); }

// log T_t(s_c(y)) - log T_t(s_c(0)) for y < 1/c (argument above 1).
double log_ratio_above(int t, double c, double y, double log_s0) {
  return cheb_eval_log_excess(t, s_excess(c, y)) - log_s0;
}

// Residual for y in [1/c, (c+1)/c], where s_c(y) lies in [-1, 1]. The
// halving route costs O(log t).
double residual_inside(int t, double c, double y, double log_s0) {
  const double s = 1.0 + s_excess(c, y);
  return cheb_eval_halving(t, std::clamp(s, -1.0, 1.0)) * std::exp(-log_s0);
}

// q_t^+(y) given log T_t(s_c(0)); `halving` selects the O(log t) route.
double qplus_with(int t, double c, double y, double log_s0, bool halving) {
  if (y == 0.0) {
    // Limit -r'(0) = (2c / (c - 1)) T_t'(s0) / T_t(s0), with
    // T_t'/T_t = t tanh(t theta) / sinh(theta) at s0 = cosh(theta).
    const double e = 2.0 / (c - 1.0);
    const double theta = std::log1p(e + std::sqrt(e * (2.0 + e)));
    return 2.0 * c / (c - 1.0) * t * std::tanh(t * theta) / std::sqrt(e * (2.0 + e));
  }
  if (c * y < 1.0) return -std::expm1(log_ratio_above(t, c, y, log_s0)) / y;
  const double r = halving ? residual_inside(t, c, y, log_s0) : qt_plus_residual(t, c, y);
  return (1.0 - r) / y;
}

// Local maxima of |f| over [lo, hi], located on a Chebyshev grid of n points
// and refined by golden-section search. End points count as extrema.
struct Extremum {
  double x;
  double value;
};

std::vector<Extremum> abs_extrema(const std::function<double(double)>& f, double lo, double hi, int n) {
  std::vector<double> g = cheb_grid(lo, hi, n);
  std::reverse(g.begin(), g.end());
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g[i]);
  std::vector<Extremum> out;
  out.push_back({g.front(), v.front()});
  for (std::size_t i = 1; i + 1 < g.size(); ++i) {
    const double a = std::abs(v[i]);
    if (!(a >= std::abs(v[i - 1]) && a > std::abs(v[i + 1]))) continue;
    double l = g[i - 1], r = g[i + 1];
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = r - phi * (r - l), x2 = l + phi * (r - l);
    double f1 = std::abs(f(x1)), f2 = std::abs(f(x2));
    for (int it = 0; it < 80 && r - l > 1e-15; ++it) {
      if (f1 < f2) {
        l = x1;
        x1 = x2;
        f1 = f2;
        x2 = l + phi * (r - l);
        f2 = std::abs(f(x2));
      } else {
        r = x2;
        x2 = x1;
        f2 = f1;
        x1 = r - phi * (r - l);
        f1 = std::abs(f(x1));
      }
    }
    double xm = 0.5 * (l + r);
    double vm = f(xm);
    if (std::abs(v[i]) > std::abs(vm)) {
      xm = g[i];
      vm = v[i];
    }
    out.push_back({xm, vm});
  }
  out.push_back({g.back(), v.back()});
  return out;
}

// Number of sign alternations (plus one) among extrema whose magnitude is
// within `rel` of `peak`.
int count_alternations(const std::vector<Extremum>& ext, double peak, double rel) {
  int count = 0;
  double last_sign = 0.0;
  for (const Extremum& e : ext) {
    if (std::abs(e.value) < (1.0 - rel) * peak) continue;
    const double sgn = e.value > 0 ? 1.0 : -1.0;
    if (sgn != last_sign) {
      ++count;
      last_sign = sgn;
    }
  }
  return count;
}

// Multiplication by x^2 in the odd basis: x^2 T_{2i+1} = (T_{2i+3} +
// 2 T_{2i+1} + T_{|2i-1|}) / 4, i.e. phi_{-1} = phi_0.
void add_times_x2(const std::vector<double>& in, double scale, std::vector<double>& out) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    const double v = scale * in[i];
    if (v == 0.0) continue;
    out[i + 1] += 0.25 * v;
    out[i] += 0.5 * v;
    out[i == 0 ? 0 : i - 1] += 0.25 * v;
  }
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::gradient_descent: return "gd";
    case Family::cks_truncated: return "cks";
    case Family::chebyshev_iteration: return "chebiter";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  if (name == "gd") return Family::gradient_descent;
  if (name == "cks") return Family::cks_truncated;
  if (name == "chebiter") return Family::chebyshev_iteration;
  throw std::invalid_argument("unknown family '" + name + "' (expected gd, cks, chebiter)");
}

void InverseApproxSpec::validate() const {
  require_params(t, kappa);
  if (family == Family::cks_truncated && (!epsilon || !(*epsilon > 0.0)))
    throw std::invalid_argument("truncated CKS needs epsilon > 0");
}

ChebSeries InverseApproxSpec::build() const {
  validate();
  switch (family) {
    case Family::gradient_descent: return gd_poly(t);
    case Family::cks_truncated: return cks_truncate(gd_poly(t), t, *epsilon);
    case Family::chebyshev_iteration: return chebiter_coeffs(t, kappa);
  }
  throw std::logic_error("unreachable");
}

ChebSeries gd_poly(int t) {
  if (t < 1) throw std::invalid_argument("gd_poly: t must be >= 1");
  // r_i = C(2t, t+i) / 4^t. r_0 = prod_k (2k-1)/(2k) stays in range for any
  // t; later terms shrink monotonically and may underflow harmlessly.
  double r = 1.0;
  for (int k = 1; k <= t; ++k) r *= (2.0 * k - 1.0) / (2.0 * k);
  std::vector<double> terms(static_cast<std::size_t>(t) + 1);
  terms[0] = r;
  for (int i = 1; i <= t; ++i) {
    r *= static_cast<double>(t - i + 1) / static_cast<double>(t + i);
    terms[i] = r;
  }
  std::vector<double> c(static_cast<std::size_t>(t));
  double tail = 0.0;
  for (int j = t - 1; j >= 0; --j) {
    tail += terms[j + 1];
    c[j] = (j % 2 == 0 ? 4.0 : -4.0) * tail;
  }
  return ChebSeries(std::move(c), Parity::odd);
}

int cks_cutoff(int t, double epsilon) {
  if (t < 1) throw std::invalid_argument("cks_cutoff: t must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("cks_cutoff: epsilon must be > 0");
  const double arg = t * std::log(4.0 * t / epsilon);
  if (arg <= 0.0) return 0;
  return static_cast<int>(std::ceil(std::sqrt(arg)));
}

ChebSeries cks_truncate(const ChebSeries& s, int t, double epsilon) {
  if (s.parity != Parity::odd) throw std::invalid_argument("cks_truncate: expects an odd series");
  const std::size_t keep = static_cast<std::size_t>(cks_cutoff(t, epsilon)) + 1;
  if (keep >= s.size()) return s;
  double dropped = 0.0;
  for (std::size_t j = keep; j < s.size(); ++j) dropped += std::abs(s.coeffs[j]);
  if (dropped > epsilon)
    throw std::logic_error("cks_truncate: dropped tail exceeds epsilon");
  return ChebSeries(std::vector<double>(s.coeffs.begin(), s.coeffs.begin() + static_cast<long>(keep)),
                    Parity::odd);
}

double log_cheb_at_s0(int t, double c) {
  if (!(c > 1.0)) throw std::invalid_argument("condition number must be > 1");
  return cheb_eval_log_excess(t, 2.0 / (c - 1.0));
}

double qt_plus_residual(int t, double c, double y) {
  require_params(t, c);
  const double log_s0 = log_cheb_at_s0(t, c);
  const double e = s_excess(c, y);
  if (e > 0.0) return std::exp(cheb_eval_log_excess(t, e) - log_s0);
  const double s = 1.0 + e;
  if (s >= -1.0) return cheb_eval(t, s) * std::exp(-log_s0);
  const double mag = std::exp(cheb_eval_log_excess(t, -s - 1.0) - log_s0);
  return t % 2 == 0 ? mag : -mag;
}

double qt_plus_eval(int t, double c, double y) {
  require_params(t, c);
  return qplus_with(t, c, y, log_cheb_at_s0(t, c), false);
}

double qt_eval(int t, double kappa, double x) {
  require_params(t, kappa);
  if (x == 0.0) return 0.0;
  return x * qt_plus_eval(t, kappa * kappa, x * x);
}

double qt_residual(int t, double kappa, double x) {
  require_params(t, kappa);
  return qt_plus_residual(t, kappa * kappa, x * x);
}

double qt_residual_product(int t, double kappa, double x) {
  require_params(t, kappa);
  const double ic = 1.0 / (kappa * kappa);
  const double x2 = x * x;
  double r = 1.0;
  for (int k = 1; k <= t; ++k) {
    const double theta = (k - 0.5) * std::numbers::pi / t;
    const double yk = 0.5 * ((1.0 + ic) - (1.0 - ic) * std::cos(theta));
    r *= 1.0 - x2 / yk;
  }
  return r;
}

void chebiter_sweep(int t_max, double kappa,
                    const std::function<bool(int, const ChebSeries&)>& visit) {
  require_params(t_max, kappa);
  const double c = kappa * kappa;
  const double gamma = (c + 1.0) / (c - 1.0);
  const double drive = 4.0 * c / (c - 1.0);
  // q_{k+1} = 2 rho_k S q_k - rho_{k-1} rho_k q_{k-1} + drive rho_k x,
  // S = ((c+1) - 2c x^2) / (c - 1), rho_k = T_k(gamma) / T_{k+1}(gamma).
  std::vector<double> prev;  // q_0 = 0
  std::vector<double> cur{2.0 * c / (c + 1.0)};
  double rho_prev = 1.0 / gamma;
  ChebSeries view(cur, Parity::odd);
  if (!visit(1, view)) return;
  for (int k = 1; k < t_max; ++k) {
    const double rho = 1.0 / (2.0 * gamma - rho_prev);
    std::vector<double> next(cur.size() + 1, 0.0);
    const double a = 2.0 * rho / (c - 1.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i] += a * (c + 1.0) * cur[i];
    add_times_x2(cur, -a * 2.0 * c, next);
    const double sigma = rho_prev * rho;
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= sigma * prev[i];
    next[0] += drive * rho;
    prev = std::move(cur);
    cur = std::move(next);
    rho_prev = rho;
    view.coeffs = cur;
    if (!visit(k + 1, view)) return;
  }
}

ChebSeries chebiter_coeffs(int t, double kappa, CoeffPath path) {
  require_params(t, kappa);
  if (path == CoeffPath::recurrence) {
    ChebSeries out;
    chebiter_sweep(t, kappa, [&](int k, const ChebSeries& s) {
      if (k == t) out = s;
      return k < t;
    });
    return out;
  }
  const double c = kappa * kappa;
  const double log_s0 = log_cheb_at_s0(t, c);
  const int m = static_cast<int>(std::bit_ceil(static_cast<unsigned>(2 * t)));
  const ChebNodes nodes(m);
  std::vector<double> values(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double x = nodes.nodes[k];
    values[k] = x * qplus_with(t, c, x * x, log_s0, true);
  }
  ChebSeries s = interpolate(values, Parity::odd, InterpMethod::fast);
  s.coeffs.resize(static_cast<std::size_t>(t));
  return s;
}

ErrorReport residual_error(const ChebSeries& s, double kappa, int grid) {
  if (!(kappa > 1.0)) throw std::invalid_argument("kappa must be > 1");
  if (grid <= 0) grid = default_grid_size(s.degree());
  ErrorReport rep;
  for (double x : cheb_grid(1.0 / kappa, 1.0, grid)) {
    for (double xs : {x, -x}) {
      const double p = series_eval(s, xs);
      rep.residual_notion2 = std::max(rep.residual_notion2, std::abs(xs * p - 1.0));
      rep.error_notion1 = std::max(rep.error_notion1, std::abs(p - 1.0 / xs));
    }
  }
  for (double x : cheb_grid(-1.0, 1.0, grid))
    rep.supnorm_full = std::max(rep.supnorm_full, std::abs(series_eval(s, x)));
  rep.coeff_norm = s.coeff_norm();
  return rep;
}

namespace {

int ceil_at_least_one(double bound) {
  if (!(bound > 1.0)) return 1;
  return static_cast<int>(std::ceil(bound));
}

double measured(const ChebSeries& s, double kappa, ErrorNotion notion) {
  const ErrorReport r = residual_error(s, kappa);
  return notion == ErrorNotion::residual ? r.residual_notion2 : r.error_notion1;
}

// Smallest k in [lo, hi] with ok(k), assuming ok is monotone and ok(hi).
int lower_bound_int(int lo, int hi, const std::function<bool(int)>& ok) {
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace

int min_degree(Family family, double kappa, double epsilon, DegreeMode mode, ErrorNotion notion) {
  if (!(kappa > 1.0)) throw std::invalid_argument("kappa must be > 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const double k2 = kappa * kappa;
  const int t_gd = ceil_at_least_one(k2 * std::log(k2 / epsilon));
  const int t_ci = ceil_at_least_one(0.5 * kappa * std::log(2.0 * k2 / epsilon));

  if (mode == DegreeMode::table) {
    switch (family) {
      case Family::chebyshev_iteration:
        return 2 * ceil_at_least_one(0.5 * kappa * std::log(2.0 * k2 / epsilon)) + 1;
      case Family::cks_truncated: {
        const double b = std::ceil(k2 * std::log(2.0 * kappa / epsilon));
        return 2 * ceil_at_least_one(std::sqrt(b * std::log(8.0 * b / epsilon))) + 1;
      }
      case Family::gradient_descent:
        throw std::invalid_argument("table mode covers the cks and chebiter families only");
    }
  }

  if (mode == DegreeMode::formula) {
    switch (family) {
      case Family::gradient_descent: return 2 * t_gd - 1;
      case Family::chebyshev_iteration: return 2 * t_ci - 1;
      case Family::cks_truncated: return 2 * std::min(t_gd - 1, cks_cutoff(t_gd, epsilon)) + 1;
    }
  }

  switch (family) {
    case Family::gradient_descent: {
      auto ok = [&](int t) { return measured(gd_poly(t), kappa, notion) <= epsilon; };
      return 2 * lower_bound_int(1, t_gd, ok) - 1;
    }
    case Family::chebyshev_iteration: {
      auto ok = [&](int t) { return measured(chebiter_coeffs(t, kappa), kappa, notion) <= epsilon; };
      return 2 * lower_bound_int(1, t_ci, ok) - 1;
    }
    case Family::cks_truncated: {
      const ChebSeries full = gd_poly(t_gd);
      auto ok = [&](int j) {
        ChebSeries s(std::vector<double>(full.coeffs.begin(), full.coeffs.begin() + j + 1), Parity::odd);
        return measured(s, kappa, notion) <= epsilon;
      };
      return 2 * lower_bound_int(0, t_gd - 1, ok) + 1;
    }
  }
  throw std::logic_error("unreachable");
}

NormBound supnorm_bound(int t, double kappa) {
  require_params(t, kappa);
  NormBound nb;
  nb.coeff_norm = chebiter_coeffs(t, kappa).coeff_norm();
  nb.bound = 2.0 * (1.0 + std::exp(-log_cheb_at_s0(t, kappa * kappa))) * t;
  if (!(nb.coeff_norm <= nb.bound * (1.0 + 1e-12)))
    throw std::logic_error("supnorm_bound: coefficient norm exceeds the analytic bound");
  return nb;
}

OptimalityReport optimality_check(int t, double kappa) {
  require_params(t, kappa);
  if (t > 32) throw std::invalid_argument("optimality_check: t must be <= 32");
  constexpr double kRel = 1e-6;
  constexpr int kLpGrid = 512;
  constexpr int kDense = 20001;

  OptimalityReport rep;
  rep.t = t;
  rep.kappa = kappa;
  rep.closed_form = std::exp(-log_cheb_at_s0(t, kappa * kappa));

  const ChebSeries q = chebiter_coeffs(t, kappa);
  for (double x : cheb_grid(-1.0, 1.0, default_grid_size(q.degree()))) {
    const double diff = (1.0 - x * series_eval(q, x)) - qt_residual(t, kappa, x);
    rep.identity_error = std::max(rep.identity_error, std::abs(diff));
  }
  rep.identity_ok = rep.identity_error <= 1e-10;

  const double lo = 1.0 / kappa;
  auto residual = [&](double x) { return qt_residual_product(t, kappa, x); };
  const std::vector<Extremum> ext = abs_extrema(residual, lo, 1.0, kDense);
  for (const Extremum& e : ext) rep.max_residual = std::max(rep.max_residual, std::abs(e.value));
  rep.alternation_points = count_alternations(ext, rep.max_residual, kRel);
  rep.equioscillates = rep.alternation_points >= t + 1 &&
                       std::abs(rep.max_residual - rep.closed_form) <= 1e-9 * rep.closed_form;

  // Discrete minimax over odd polynomials P of degree 2t - 1 on a Chebyshev
  // grid of [1/kappa, 1] (the residual is even, so the mirror is redundant).
  // The measured extrema of q_t's residual replace their nearest grid points.
  // With y = x^2, x P(x) = y P^+(y) and P^+ is expanded in T_j of y mapped
  // from [1/kappa^2, 1] onto [-1, 1], which keeps the LP well conditioned.
  std::vector<double> grid = cheb_grid(lo, 1.0, kLpGrid);
  for (const Extremum& e : ext) {
    if (std::abs(e.value) < (1.0 - kRel) * rep.max_residual) continue;
    auto it = std::min_element(grid.begin(), grid.end(), [&](double a, double b) {
      return std::abs(a - e.x) < std::abs(b - e.x);
    });
    *it = e.x;
  }
  const double ylo = lo * lo;
  auto mapped = [&](double x) { return (2.0 * x * x - (1.0 + ylo)) / (1.0 - ylo); };
  Eigen::MatrixXd basis(kLpGrid, t);
  for (int k = 0; k < kLpGrid; ++k)
    for (int j = 0; j < t; ++j) basis(k, j) = grid[k] * grid[k] * cheb_eval(j, mapped(grid[k]));
  const MinimaxSolution lp = discrete_minimax(basis, Eigen::VectorXd::Ones(kLpGrid));
  rep.lp_optimum = lp.error;

  const ChebSeries challenger(lp.weights, Parity::none);
  auto challenger_residual = [&](double x) { return 1.0 - x * x * series_eval(challenger, mapped(x)); };
  for (const Extremum& e : abs_extrema(challenger_residual, lo, 1.0, kDense))
    rep.lp_challenger = std::max(rep.lp_challenger, std::abs(e.value));

  // LP arithmetic carries ~1e-13 absolute error; below this scale the
  // relative comparison is meaningless.
  rep.lp_resolvable = rep.closed_form >= 1e-7;
  const double floor = (1.0 - kRel) * rep.closed_form;
  // q_t itself is feasible for the LP, so the optimum cannot exceed its value.
  rep.lp_ok = rep.lp_resolvable && rep.lp_optimum >= floor && rep.lp_challenger >= floor &&
              rep.lp_optimum <= (1.0 + kRel) * rep.closed_form;
  return rep;
}

}  // namespace chebqls
