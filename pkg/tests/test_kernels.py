import os
import subprocess
import sys

import numpy as np
import pytest

from charge2 import kernels
from charge2.orthopoly import LaguerreBasis

BACKENDS = kernels.available_backends()


def test_python_backend_always_present():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


def test_env_var_forces_python():
    env = dict(os.environ, CHARGE2_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from charge2.kernels import BACKEND; print(BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")
@pytest.mark.parametrize("n", [1, 2, 37, 400])
def test_eigvalsh_parity(n):
    diag, offsq = LaguerreBasis(n).jacobi_matrix()
    got = {k: m.tridiag_eigvalsh(diag, offsq, 1e-14, 100 * n) for k, m in BACKENDS.items()}
    a, b = got["cython"][0], got["python"][0]
    assert np.asarray(a) == pytest.approx(np.asarray(b), rel=1e-13)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")
def test_scalar_kernel_parity():
    c, p = BACKENDS["cython"], BACKENDS["python"]
    for n, y in [(0, 1.0), (5, 0.2), (300, 600.0), (3000, 1e5)]:
        assert c.laguerre_log_neg(n, -0.5, y) == pytest.approx(p.laguerre_log_neg(n, -0.5, y), rel=1e-13)
    xs = np.linspace(0.1, 50.0, 17)
    assert np.asarray(c.laguerre_newton_deltas(40, -0.5, xs)) == pytest.approx(
        np.asarray(p.laguerre_newton_deltas(40, -0.5, xs)), rel=1e-12)
    probs = np.random.default_rng(3).uniform(0.01, 0.99, 250)
    assert np.asarray(c.bernoulli_pmf(probs)) == pytest.approx(np.asarray(p.bernoulli_pmf(probs)), abs=1e-15)


def test_eigvalsh_reports_exhausted_budget():
    for mod in BACKENDS.values():
        diag, offsq = LaguerreBasis(8).jacobi_matrix()
        _, iters = mod.tridiag_eigvalsh(diag, offsq, 1e-14, 3)
        assert (np.asarray(iters) < 0).any()
