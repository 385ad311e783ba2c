"""The compiled kernels and the NumPy fallback implement the same algorithm."""
import os
import subprocess
import sys

import numpy as np
import pytest

from casimir_plasma import _fallback
from casimir_plasma._core import BACKEND

_kernels = pytest.importorskip("casimir_plasma._kernels")

P_VALUES = [1.0, 12.0, 117.0, 1e4, float("inf")]


@pytest.mark.parametrize("p", P_VALUES)
def test_loop_f(p):
    s = np.linspace(1e-3, 50.0, 301)
    for a0 in (0.0, 0.7, 5.0):
        ref = _fallback.loop_f(s, a0, p)
        got = np.array([_kernels.loop_f(x, a0, p) for x in s])
        np.testing.assert_allclose(got, ref, rtol=1e-13)


@pytest.mark.parametrize("p", P_VALUES)
def test_kappa_integral(p):
    for a0 in (0.0, 0.3, 4.0, 30.0):
        a = _kernels.kappa_integral(a0, p)
        b = _fallback.kappa_integral(a0, p)
        assert a[0] == pytest.approx(b[0], rel=1e-13) and a[2] == b[2]


@pytest.mark.parametrize("p", [12.0, 117.0, float("inf")])
def test_matsubara_sum(p):
    for step in (0.05, 0.5, 3.0):
        a = _kernels.matsubara_sum(step, p)
        b = _fallback.matsubara_sum(step, p)
        assert a[0] == pytest.approx(b[0], rel=1e-13)
        assert a[2:] == b[2:]


@pytest.mark.parametrize("p", [12.0, float("inf")])
def test_xi_integral(p):
    a = _kernels.xi_integral(p)
    b = _fallback.xi_integral(p)
    assert a[0] == pytest.approx(b[0], rel=1e-13) and a[2] == b[2]


def test_many_matches_single():
    a0 = np.array([0.0, 0.5, 2.0])
    vals, errs, status = _kernels.kappa_integral_many(a0, 30.0)
    for x, v in zip(a0, vals):
        assert v == _kernels.kappa_integral(x, 30.0)[0]
    assert status == 0


def test_backend_selection_env():
    assert BACKEND == "cython"
    env = dict(os.environ, CASIMIR_PLASMA_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import casimir_plasma as c; print(c.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_status_codes_agree():
    a = _kernels.kappa_integral(0.0, 1.0, 1e-15, 0.0, 60.0, 8)
    b = _fallback.kappa_integral(0.0, 1.0, 1e-15, 0.0, 60.0, 8)
    assert a[2] == b[2] == 1
