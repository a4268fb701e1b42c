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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chebqls/approx_family.hpp"
#include "chebqls/blockenc_sim.hpp"
#include "chebqls/cheb_core.hpp"
#include "chebqls/iterative_solvers.hpp"
#include "chebqls/lowerbound.hpp"
#include "chebqls/report.hpp"
#include "chebqls/special_funcs.hpp"

namespace py = pybind11;
using namespace chebqls;

namespace {

IntMatrix to_int_matrix(const py::array_t<long long, py::array::c_style | py::array::forcecast>& x) {
  if (x.ndim() != 2) throw std::invalid_argument("expected a 2-d integer array");
  IntMatrix m(static_cast<int>(x.shape(0)), static_cast<int>(x.shape(1)));
  auto r = x.unchecked<2>();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = r(i, j);
  return m;
}

py::array_t<long long> from_int_matrix(const IntMatrix& m) {
  py::array_t<long long> out({m.rows(), m.cols()});
  auto w = out.mutable_unchecked<2>();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) w(i, j) = static_cast<long long>(m(i, j));
  return out;
}

py::dict block_dict(const BlockEncoding& be) {
  py::dict d;
  d["block"] = be.encoded();
  d["mu"] = be.mu;
  d["ancillas"] = be.ancillas;
  d["query_count"] = be.query_count;
  d["controlled_calls"] = be.controlled_calls;
  return d;
}

}  // namespace

PYBIND11_MODULE(_chebqls, m) {
  m.doc() = "Chebyshev-iteration polynomials for quantum linear systems";

  py::enum_<Parity>(m, "Parity").value("none", Parity::none).value("odd", Parity::odd).value("even", Parity::even);

  py::class_<ChebSeries>(m, "ChebSeries")
      .def(py::init<std::vector<double>, Parity>(), py::arg("coeffs"), py::arg("parity") = Parity::none)
      .def_readwrite("coeffs", &ChebSeries::coeffs)
      .def_readwrite("parity", &ChebSeries::parity)
      .def("degree", &ChebSeries::degree)
      .def("dense", &ChebSeries::dense)
      .def("coeff_norm", &ChebSeries::coeff_norm)
      .def("__len__", &ChebSeries::size)
      .def("__call__", [](const ChebSeries& s, double x) { return series_eval(s, x); })
      .def("__repr__", [](const ChebSeries& s) {
        return "<ChebSeries degree=" + std::to_string(s.degree()) + " parity=" + to_string(s.parity) + ">";
      });

  m.def("cheb_eval", &cheb_eval, py::arg("t"), py::arg("x"));
  m.def("interpolate_function", &interpolate_function, py::arg("f"), py::arg("m"), py::arg("parity") = Parity::none);

  py::enum_<Family>(m, "Family")
      .value("gradient_descent", Family::gradient_descent)
      .value("cks_truncated", Family::cks_truncated)
      .value("chebyshev_iteration", Family::chebyshev_iteration);
  py::enum_<DegreeMode>(m, "DegreeMode")
      .value("formula", DegreeMode::formula)
      .value("measured", DegreeMode::measured)
      .value("table", DegreeMode::table);
  py::enum_<CoeffPath>(m, "CoeffPath").value("fast", CoeffPath::fast).value("recurrence", CoeffPath::recurrence);

  py::class_<ErrorReport>(m, "ErrorReport")
      .def_readonly("residual_notion2", &ErrorReport::residual_notion2)
      .def_readonly("error_notion1", &ErrorReport::error_notion1)
      .def_readonly("supnorm_full", &ErrorReport::supnorm_full)
      .def_readonly("coeff_norm", &ErrorReport::coeff_norm);

  m.def("gd_poly", &gd_poly, py::arg("t"));
  m.def("cks_truncate", &cks_truncate, py::arg("series"), py::arg("t"), py::arg("epsilon"));
  m.def("chebiter_coeffs", &chebiter_coeffs, py::arg("t"), py::arg("kappa"), py::arg("path") = CoeffPath::fast);
  m.def("qt_eval", &qt_eval, py::arg("t"), py::arg("kappa"), py::arg("x"));
  m.def("qt_residual", &qt_residual, py::arg("t"), py::arg("kappa"), py::arg("x"));
  m.def("log_cheb_at_s0", &log_cheb_at_s0, py::arg("t"), py::arg("c"));
  m.def("residual_error", &residual_error, py::arg("series"), py::arg("kappa"), py::arg("grid") = 0);
  m.def("min_degree", [](Family f, double kappa, double eps, DegreeMode mode) { return min_degree(f, kappa, eps, mode); },
        py::arg("family"), py::arg("kappa"), py::arg("epsilon"), py::arg("mode") = DegreeMode::formula);
  m.def("cks_at_degree", [](double kappa, int degree) {
    CksAtDegree c = cks_at_degree(kappa, degree);
    return py::make_tuple(c.t, c.series);
  }, py::arg("kappa"), py::arg("degree"));

  m.def("random_indefinite", [](int n, double kappa, std::uint64_t seed) {
    return DenseHermitian::random_indefinite(n, kappa, seed).matrix();
  }, py::arg("n"), py::arg("kappa"), py::arg("seed") = 1);
  m.def("general_solve", [](const CMatrix& a, const CVector& b, int t, double kappa) {
    return general_solve(DenseHermitian(a, kappa), b, t, kappa);
  }, py::arg("a"), py::arg("b"), py::arg("t"), py::arg("kappa"));
  m.def("qtplus_blowup_log", &qtplus_blowup_log, py::arg("t"), py::arg("kappa"));

  m.def("chebyshev_block", [](const CMatrix& a, double kappa, int t) {
    return block_dict(chebyshev_block(dilate(DenseHermitian(a, kappa)), t));
  }, py::arg("a"), py::arg("kappa"), py::arg("t"));
  m.def("qsvt_chebyshev", [](const CMatrix& a, double kappa, int t) {
    return qsvt_sequence(dilate(DenseHermitian(a, kappa)), chebyshev_phases(t));
  }, py::arg("a"), py::arg("kappa"), py::arg("t"));
  m.def("lcu_block", [](const CMatrix& a, double kappa, const ChebSeries& c) {
    return block_dict(lcu_apply(dilate(DenseHermitian(a, kappa)), c));
  }, py::arg("a"), py::arg("kappa"), py::arg("series"));
  m.def("solve_qls", [](const CMatrix& a, const CVector& b, int t, double kappa) {
    const QlsOutput q = solve_qls(dilate(DenseHermitian(a, kappa)), b, t, kappa);
    py::dict d;
    d["x"] = q.x;
    d["alpha"] = q.alpha;
    d["residual"] = q.residual;
    d["mu"] = q.mu;
    d["query_count"] = q.query_count;
    return d;
  }, py::arg("a"), py::arg("b"), py::arg("t"), py::arg("kappa"));

  m.def("bessel_i_scaled", &bessel_i_scaled, py::arg("n"), py::arg("x"));
  m.def("monomial_cheb", &monomial_cheb, py::arg("n"));
  m.def("exp_cheb", &exp_cheb, py::arg("kappa"), py::arg("degree"));
  m.def("slog_cheb", &slog_cheb, py::arg("kappa"), py::arg("degree"));
  m.def("erf_cheb", &erf_cheb, py::arg("kappa"), py::arg("n_max"));
  m.def("erf_degree", &erf_degree, py::arg("kappa"), py::arg("epsilon"));
  m.def("erf_reference", &erf_reference, py::arg("z"));
  m.def("sign_rect_approx", [](double delta, double eps, const std::string& shape) {
    StepApprox s = sign_rect_approx(delta, eps, step_shape_from_string(shape));
    return py::make_tuple(s.series, s.kappa);
  }, py::arg("delta"), py::arg("epsilon"), py::arg("shape") = "sign");

  m.def("random_binary", [](int n, double density, std::uint64_t seed) { return from_int_matrix(random_binary(n, density, seed)); },
        py::arg("n"), py::arg("density") = 0.5, py::arg("seed") = 1);
  m.def("gadget_matrix", [](const py::array_t<long long, py::array::c_style | py::array::forcecast>& x, bool directed) {
    return from_int_matrix(gadget_matrix(to_int_matrix(x), directed));
  }, py::arg("x"), py::arg("directed") = false);
  m.def("gadget_identities", [](const py::array_t<long long, py::array::c_style | py::array::forcecast>& x) {
    py::list out;
    for (const auto& r : gadget_identities(to_int_matrix(x))) {
      py::dict d;
      d["name"] = r.name;
      d["lhs"] = r.lhs;
      d["rhs"] = r.rhs;
      d["pass"] = r.pass;
      out.append(d);
    }
    return out;
  }, py::arg("x"));

  m.def("table_degrees", [](const std::vector<double>& kappas, const std::vector<double>& epsilons) {
    SweepConfig cfg;
    cfg.kappas = kappas;
    cfg.epsilons = epsilons;
    py::list out;
    for (const auto& r : table_degrees(cfg)) out.append(py::make_tuple(r.kappa, r.epsilon, r.cks_degree, r.chebiter_degree));
    return out;
  }, py::arg("kappas"), py::arg("epsilons"));
  m.def("verify_all", [](std::uint64_t seed, bool inject_fault) {
    py::list out;
    for (const auto& c : verify_all(seed, inject_fault)) out.append(py::make_tuple(c.claim, c.pass, c.detail));
    return out;
  }, py::arg("seed") = 1, py::arg("inject_fault") = false);
}
