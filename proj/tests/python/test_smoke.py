# Copyright 2026 The chebqls Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest
from numpy.polynomial import chebyshev as npcheb

import chebqls as cq


def dense(series):
    return np.asarray(series.dense())


def test_degree_table_corners():
    rows = cq.table_degrees([2, 1000], [0.5, 1e-6])
    assert rows[0] == (2.0, 0.5, 15, 7)
    assert rows[-1] == (1000.0, 1e-6, 52989, 28327)


@pytest.mark.parametrize("kappa", [2.0, 8.0])
@pytest.mark.parametrize("t", [1, 5, 12])
def test_chebiter_residual_matches_closed_form(kappa, t):
    s = cq.chebiter_coeffs(t, kappa)
    x = np.cos(np.linspace(0, np.pi, 2001)) * (1 - 1 / kappa) / 2 + (1 + 1 / kappa) / 2
    r = np.abs(x * npcheb.chebval(x, dense(s)) - 1).max()
    c = kappa * kappa
    closed = 1 / math.cosh(t * math.acosh((c + 1) / (c - 1)))
    assert r == pytest.approx(closed, rel=1e-9)
    assert cq.residual_error(s, kappa).residual_notion2 == pytest.approx(closed, rel=1e-9)


def test_fast_and_recurrence_paths_agree():
    a = dense(cq.chebiter_coeffs(300, 20.0, cq.CoeffPath.fast))
    b = dense(cq.chebiter_coeffs(300, 20.0, cq.CoeffPath.recurrence))
    assert np.linalg.norm(a - b) <= 1e-9 * np.linalg.norm(b)


def test_lcu_block_against_eigendecomposition():
    kappa, t = 4.0, 6
    a = cq.random_indefinite(4, kappa, seed=7)
    w, v = np.linalg.eigh(a)
    s = cq.chebiter_coeffs(t, kappa)
    want = (v * npcheb.chebval(w, dense(s))) @ v.conj().T
    out = cq.lcu_block(a, kappa, s)
    assert out["query_count"] == 2 * t - 1
    assert out["mu"] == pytest.approx(s.coeff_norm())
    assert np.abs(out["block"] - want).max() <= 1e-9


def test_chebyshev_block_and_qsvt():
    a = cq.random_indefinite(3, 3.0, seed=2)
    w, v = np.linalg.eigh(a)
    want = (v * np.cos(7 * np.arccos(np.clip(w, -1, 1)))) @ v.conj().T
    assert np.abs(cq.chebyshev_block(a, 3.0, 7)["block"] - want).max() <= 1e-9
    assert np.abs(cq.qsvt_chebyshev(a, 3.0, 7) - want).max() <= 1e-9


def test_solve_qls():
    a = np.diag([1.0, 0.25]).astype(complex)
    b = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2)
    out = cq.solve_qls(a, b, 20, 4.0)
    x = np.linalg.solve(a, b)
    assert abs(np.vdot(x / np.linalg.norm(x), out["x"])) == pytest.approx(1.0, abs=1e-8)


def test_erf_series():
    s = cq.erf_cheb(2.0, 32)
    xs = np.linspace(-1, 1, 501)
    assert max(abs(s(x) - math.erf(2 * x)) for x in xs) <= 1e-10


def test_gadget():
    x = cq.random_binary(6, 0.4, seed=3)
    a = cq.gadget_matrix(x)
    assert np.linalg.matrix_power(a, 3)[0, -1] == x.sum()
    assert all(r["pass"] for r in cq.gadget_identities(x))


def test_verify_and_fault_injection():
    assert all(ok for _, ok, _ in cq.verify_all(1))
    failed = [name for name, ok, _ in cq.verify_all(1, inject_fault=True) if not ok]
    assert len(failed) == 1 and "1-norm" in failed[0]


def test_errors_surface_as_value_error():
    with pytest.raises(ValueError):
        cq.chebyshev_block(np.eye(2, dtype=complex), 2.0, 4)
    with pytest.raises(ValueError):
        cq.min_degree(cq.Family.gradient_descent, 2.0, 0.5, cq.DegreeMode.table)
