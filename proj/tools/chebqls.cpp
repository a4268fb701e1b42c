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

// Command-line front end. Data (CSV or JSON) goes to --out or stdout. The
// one-line JSON summaries of sweep and bench go to stdout when --out names a
// file and to stderr otherwise; special always appends its summary to stdout.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chebqls/approx_family.hpp"
#include "chebqls/blockenc_sim.hpp"
#include "chebqls/cheb_core.hpp"
#include "chebqls/iterative_solvers.hpp"
#include "chebqls/lowerbound.hpp"
#include "chebqls/report.hpp"
#include "chebqls/special_funcs.hpp"

using json = nlohmann::json;
using namespace chebqls;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string out;
  std::string config;
  std::uint64_t seed = 1;
  int grid = 0;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open " + path + " for writing");
    }
  }
  std::ostream& data() { return file_ ? *file_ : std::cout; }
  std::ostream& summary() { return file_ ? std::cout : std::cerr; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  throw UsageError("config values must be scalars or lists of scalars");
}

// Fills every option not given on the command line from the config object,
// keyed by the option's long name.
void apply_config(CLI::App* app, const json& cfg) {
  for (CLI::Option* opt : app->get_options()) {
    if (opt->count() > 0 || opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    auto it = cfg.find(name);
    if (it == cfg.end()) continue;
    if (it->is_array()) {
      for (const json& e : *it) opt->add_result(scalar(e));
    } else {
      opt->add_result(scalar(*it));
    }
    opt->run_callback();
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!cfg.is_object() || cfg.empty()) throw UsageError("config " + path + " has no fields");
  return cfg;
}

std::vector<Family> parse_families(const std::vector<std::string>& names) {
  std::vector<Family> out;
  for (const auto& n : names) out.push_back(family_from_string(n));
  return out;
}

double max_error(const ChebSeries& s, const std::function<double(double)>& f, const std::vector<double>& xs) {
  double e = 0.0;
  for (double x : xs) e = std::max(e, std::abs(series_eval(s, x) - f(x)));
  return e;
}

CMatrix spectral(const CMatrix& a, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  Eigen::VectorXcd fl(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) fl(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * fl.asDiagonal() * es.eigenvectors().adjoint();
}

// -- subcommands ---------------------------------------------------------

struct DegreesArgs {
  std::vector<double> kappa{2, 10, 100, 1000};
  std::vector<double> epsilon{0.5, 1e-2, 1e-4, 1e-6};
};

int run_degrees(const Globals& g, const DegreesArgs& a) {
  SweepConfig cfg;
  cfg.kappas = a.kappa;
  cfg.epsilons = a.epsilon;
  cfg.seed = g.seed;
  try {
    cfg.validate_table();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Output out(g.out);
  write_degrees_csv(out.data(), table_degrees(cfg));
  return 0;
}

struct SweepArgs {
  std::vector<double> kappa{16};
  std::vector<int> degree;
  std::vector<std::string> family{"cks", "chebiter"};
  int threads = 0;
  bool filter = false;
};

int run_sweep(const Globals& g, SweepArgs a) {
  if (a.degree.empty())
    for (int d = 3; d <= 255; d += 4) a.degree.push_back(d);
  SweepConfig cfg;
  cfg.kappas = a.kappa;
  cfg.degrees = a.degree;
  cfg.families = parse_families(a.family);
  cfg.grid = g.grid;
  cfg.seed = g.seed;
  cfg.threads = a.threads;
  cfg.filter_unit_error = a.filter;
  try {
    cfg.validate_sweep();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const SweepResult r = error_sweep(cfg);
  Output out(g.out);
  write_sweep_csv(out.data(), r.rows);
  json s;
  s["slopes"] = json::array();
  for (const auto& f : r.slopes) s["slopes"].push_back({{"family", to_string(f.family)}, {"kappa", f.kappa}, {"slope", f.slope}, {"points", f.points}});
  s["slope_ratios"] = json::array();
  for (const auto& [k, ratio] : r.slope_ratios) s["slope_ratios"].push_back({{"kappa", k}, {"ratio", ratio}});
  out.summary() << s.dump() << '\n';
  return 0;
}

struct CoeffsArgs {
  std::string family = "chebiter";
  double kappa = 10;
  int t = 10;
  double epsilon = 0.0;
  std::string path = "fast";
  int norm_sweep = 0;
};

int run_coeffs(const Globals& g, const CoeffsArgs& a) {
  Output out(g.out);
  if (a.norm_sweep > 0) {
    out.data() << "t,coeff_norm,bound\n";
    chebiter_sweep(a.norm_sweep, a.kappa, [&](int t, const ChebSeries& c) {
      const double bound = 2.0 * (1.0 + std::exp(-log_cheb_at_s0(t, a.kappa * a.kappa))) * t;
      out.data() << t << ',' << format_double(c.coeff_norm()) << ',' << format_double(bound) << '\n';
      return true;
    });
    return 0;
  }
  if (a.t < 1) throw UsageError("--t must be >= 1");
  ChebSeries s;
  switch (family_from_string(a.family)) {
    case Family::gradient_descent:
      s = gd_poly(a.t);
      break;
    case Family::cks_truncated:
      if (!(a.epsilon > 0.0)) throw UsageError("cks needs --epsilon > 0");
      s = cks_truncate(gd_poly(a.t), a.t, a.epsilon);
      break;
    case Family::chebyshev_iteration:
      if (a.path != "fast" && a.path != "recurrence") throw UsageError("--path must be fast or recurrence");
      s = chebiter_coeffs(a.t, a.kappa, a.path == "fast" ? CoeffPath::fast : CoeffPath::recurrence);
      break;
  }
  write_csv(out.data(), s);
  return 0;
}

struct BenchArgs {
  std::vector<int> t{256, 512, 1024, 2048, 4096};
  double kappa = 64;
  double min_seconds = 0.05;
};

int run_bench(const Globals& g, const BenchArgs& a) {
  const BenchResult r = bench_coeffs(a.t, a.kappa, a.min_seconds);
  Output out(g.out);
  write_bench_csv(out.data(), r);
  json s;
  s["fast_ratios"] = r.fast_ratios;
  s["recurrence_ratios"] = r.recurrence_ratios;
  out.summary() << s.dump() << '\n';
  return 0;
}

struct SimulateArgs {
  int n = 4;
  double kappa = 4;
  int t = 5;
  std::string circuit = "lcu";
};

int run_simulate(const Globals& g, const SimulateArgs& a) {
  if (a.n < 1 || a.n > 16) throw UsageError("--n must be in [1, 16]");
  if (a.t < 1) throw UsageError("--t must be >= 1");
  const DenseHermitian mat = DenseHermitian::random_indefinite(a.n, a.kappa, g.seed);
  const BlockEncoding be = dilate(mat);
  json r;
  double block_error = 0.0;
  int queries = 0;
  double mu = 1.0;
  if (a.circuit == "w-form" || a.circuit == "qsvt") {
    const CMatrix want = spectral(mat.matrix(), [&](double x) { return std::cos(a.t * std::acos(std::clamp(x, -1.0, 1.0))); });
    if (a.circuit == "w-form") {
      const BlockEncoding w = chebyshev_block(be, a.t);
      block_error = (w.encoded() - want).cwiseAbs().maxCoeff();
      queries = w.query_count;
      mu = w.mu;
    } else {
      block_error = (qsvt_sequence(be, chebyshev_phases(a.t)) - want).cwiseAbs().maxCoeff();
      queries = a.t;
    }
  } else if (a.circuit == "lcu") {
    const ChebSeries c = chebiter_coeffs(a.t, a.kappa);
    const BlockEncoding l = lcu_apply(be, c);
    const CMatrix want = spectral(mat.matrix(), [&](double x) { return qt_eval(a.t, a.kappa, x); });
    block_error = (l.encoded() - want).cwiseAbs().maxCoeff();
    queries = l.query_count;
    mu = l.mu;
  } else {
    throw UsageError("--circuit must be w-form, qsvt or lcu");
  }
  CVector b = CVector::Ones(a.n) / std::sqrt(static_cast<double>(a.n));
  const QlsOutput q = solve_qls(be, b, a.t, a.kappa);
  r["circuit"] = a.circuit;
  r["mu"] = mu;
  r["block_error"] = block_error;
  r["alpha"] = q.alpha;
  r["residual"] = q.residual;
  r["query_count"] = queries;
  Output out(g.out);
  out.data() << r.dump() << '\n';
  return 0;
}

struct SpecialArgs {
  std::string function = "erf";
  double kappa = 2;
  int degree = -1;
  double epsilon = 0.0;
  double delta = 0.1;
};

int run_special(const Globals& g, const SpecialArgs& a) {
  const bool by_degree = a.degree >= 0, by_eps = a.epsilon > 0.0;
  const std::string& f = a.function;
  const bool step = f == "sign" || f == "rect";
  if (!step && by_degree == by_eps) throw UsageError("give exactly one of --degree and --epsilon");
  if (step && !by_eps) throw UsageError(f + " needs --epsilon");

  const std::vector<double> xs = cheb_grid(-1.0, 1.0, g.grid > 0 ? g.grid : 4096);
  std::function<double(double)> exact;
  std::function<ChebSeries(int)> build;
  if (f == "monomial") {
    exact = [&](double x) { return std::pow(x, by_degree ? a.degree : 0); };
    build = [](int d) { return monomial_cheb(d); };
    if (by_eps) throw UsageError("monomial takes --degree");
  } else if (f == "exp") {
    exact = [&](double x) { return std::exp(a.kappa * (x - 1.0)); };
    build = [&](int d) { return exp_cheb(a.kappa, d); };
  } else if (f == "slog") {
    exact = [&](double x) { return std::log(1.0 / a.kappa + (x + 1.0) / 2.0 * (1.0 - 1.0 / a.kappa)); };
    build = [&](int d) { return slog_cheb(a.kappa, d); };
  } else if (f == "erf") {
    exact = [&](double x) { return erf_reference(a.kappa * x); };
    build = [&](int d) { return erf_cheb(a.kappa, std::max(0, (d - 1) / 2)); };
  } else if (!step) {
    throw UsageError("--function must be monomial, exp, slog, erf, sign or rect");
  }

  ChebSeries s;
  double err = 0.0;
  if (step) {
    const StepShape shape = step_shape_from_string(f);
    s = sign_rect_approx(a.delta, a.epsilon, shape).series;
    std::vector<double> outside;
    for (double x : xs) {
      const double ax = std::abs(x);
      if (shape == StepShape::sign ? ax >= a.delta : std::abs(ax - 0.5) >= a.delta) outside.push_back(x);
    }
    err = max_error(s, [&](double x) {
      if (shape == StepShape::sign) return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
      return std::abs(x) <= 0.5 ? 1.0 : 0.0;
    }, outside);
  } else if (by_degree) {
    s = build(a.degree);
    err = max_error(s, exact, xs);
  } else if (f == "erf") {
    s = erf_cheb(a.kappa, erf_degree(a.kappa, a.epsilon));
    err = max_error(s, exact, xs);
  } else {
    int d = 0;
    for (;; ++d) {
      if (d > 4096) throw std::runtime_error("no degree <= 4096 reaches the requested epsilon");
      s = build(d);
      err = max_error(s, exact, xs);
      if (err <= a.epsilon) break;
    }
  }
  Output out(g.out);
  write_csv(out.data(), s);
  json j{{"coeff_norm", s.coeff_norm()}, {"grid_error", err}, {"degree", s.degree()}};
  std::cout << j.dump() << '\n';
  return 0;
}

struct GadgetArgs {
  int n = 8;
  double density = 0.5;
};

int run_gadget(const Globals& g, const GadgetArgs& a) {
  if (a.n < 1 || a.n > 32) throw UsageError("--n must be in [1, 32]");
  const auto rows = gadget_identities(random_binary(a.n, a.density, g.seed));
  Output out(g.out);
  bool ok = true;
  for (const auto& r : rows) {
    out.data() << (r.pass ? "PASS  " : "FAIL  ") << r.name << "  lhs=" << r.lhs << "  rhs=" << r.rhs << '\n';
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}

int run_verify(const Globals& g, bool inject_fault) {
  const auto claims = verify_all(g.seed, inject_fault);
  Output out(g.out);
  write_claims(out.data(), claims);
  for (const auto& c : claims)
    if (!c.pass) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chebyshev-iteration polynomials for quantum linear systems"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--grid", g.grid, "Grid points per interval (0 = default)")->capture_default_str();
  app.add_option("--config", g.config, "JSON file with the same field names as the flags");

  DegreesArgs degrees;
  auto* c_deg = app.add_subcommand("degrees", "Degree table for CKS and Chebyshev iteration");
  c_deg->add_option("--kappa", degrees.kappa)->capture_default_str();
  c_deg->add_option("--epsilon", degrees.epsilon)->capture_default_str();

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Residual and error per family, kappa and degree");
  c_sweep->add_option("--kappa", sweep.kappa)->capture_default_str();
  c_sweep->add_option("--degree", sweep.degree, "Odd degrees (default 3, 7, ..., 255)");
  c_sweep->add_option("--family", sweep.family)->capture_default_str();
  c_sweep->add_option("--threads", sweep.threads, "Worker threads (0 = hardware)");
  c_sweep->add_flag("--filter-unit-error", sweep.filter, "Drop rows whose error exceeds 1");

  CoeffsArgs coeffs;
  auto* c_coef = app.add_subcommand("coeffs", "Chebyshev coefficients of one polynomial");
  c_coef->add_option("--family", coeffs.family)->capture_default_str();
  c_coef->add_option("--kappa", coeffs.kappa)->capture_default_str();
  c_coef->add_option("--t", coeffs.t)->capture_default_str();
  c_coef->add_option("--epsilon", coeffs.epsilon, "CKS truncation tolerance");
  c_coef->add_option("--path", coeffs.path, "fast or recurrence")->capture_default_str();
  c_coef->add_option("--norm-sweep", coeffs.norm_sweep, "Emit t,coeff_norm,bound for t = 1..T instead");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Time the fast and recurrence coefficient paths");
  c_bench->add_option("--t", bench.t)->capture_default_str();
  c_bench->add_option("--kappa", bench.kappa)->capture_default_str();
  c_bench->add_option("--min-seconds", bench.min_seconds)->capture_default_str();

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate a block-encoding circuit on a random matrix");
  c_sim->add_option("--n", sim.n)->capture_default_str();
  c_sim->add_option("--kappa", sim.kappa)->capture_default_str();
  c_sim->add_option("--t", sim.t)->capture_default_str();
  c_sim->add_option("--circuit", sim.circuit, "w-form, qsvt or lcu")->capture_default_str();

  SpecialArgs special;
  auto* c_spec = app.add_subcommand("special", "Chebyshev series of a special function");
  c_spec->add_option("--function", special.function, "monomial, exp, slog, erf, sign or rect")->capture_default_str();
  c_spec->add_option("--kappa", special.kappa)->capture_default_str();
  c_spec->add_option("--degree", special.degree, "Polynomial degree");
  c_spec->add_option("--epsilon", special.epsilon, "Target accuracy");
  c_spec->add_option("--delta", special.delta, "Gap around the jumps (sign, rect)")->capture_default_str();

  GadgetArgs gadget;
  auto* c_gad = app.add_subcommand("gadget", "Check the lower-bound gadget identities on a random X");
  c_gad->add_option("--n", gadget.n)->capture_default_str();
  c_gad->add_option("--density", gadget.density)->capture_default_str();

  bool inject_fault = false;
  auto* c_ver = app.add_subcommand("verify", "Run the reduced invariant suite");
  c_ver->add_flag("--inject-fault", inject_fault, "Corrupt one coefficient vector (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!g.config.empty()) {
      const json cfg = load_config(g.config);
      apply_config(&app, cfg);
      for (CLI::App* sub : app.get_subcommands()) apply_config(sub, cfg);
    }
    if (c_deg->parsed()) return run_degrees(g, degrees);
    if (c_sweep->parsed()) return run_sweep(g, sweep);
    if (c_coef->parsed()) return run_coeffs(g, coeffs);
    if (c_bench->parsed()) return run_bench(g, bench);
    if (c_sim->parsed()) return run_simulate(g, sim);
    if (c_spec->parsed()) return run_special(g, special);
    if (c_gad->parsed()) return run_gadget(g, gadget);
    if (c_ver->parsed()) return run_verify(g, inject_fault);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
