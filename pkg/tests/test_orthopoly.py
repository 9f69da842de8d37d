import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import roots_genlaguerre

from charge2.orthopoly import LaguerreBasis, RootFindingError, laguerre_log_at_negative, laguerre_roots

from oracles import laguerre_roots_mp, laguerre_series, log_laguerre_at_negative


def test_degree_zero_is_one():
    assert laguerre_log_at_negative(0, 5.0) == 0.0


def test_degree_one_closed_form():
    assert laguerre_log_at_negative(1, 2.0) == pytest.approx(math.log(2.5), abs=1e-15)


@pytest.mark.parametrize("n,y", [(3, 1.0), (7, 0.3), (12, 40.0), (25, 1e3)])
def test_matches_extended_precision_series(n, y):
    assert laguerre_log_at_negative(n, y) == pytest.approx(log_laguerre_at_negative(n, y), rel=1e-13, abs=1e-13)


def test_huge_values_stay_finite():
    # L_2000(-1e6) is far beyond double range
    v = laguerre_log_at_negative(2000, 1e6)
    assert math.isfinite(v) and v > 700


def test_log_product_identity():
    # L_n(-y) = (lead coeff) prod (-y - xi_k), lead = (-1)^n / n!
    n, y = 40, 3.7
    xi = laguerre_roots(n).roots
    expect = np.log(y + xi).sum() - math.lgamma(n + 1)
    assert laguerre_log_at_negative(n, y) == pytest.approx(expect, rel=1e-12)


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        laguerre_log_at_negative(-1, 1.0)
    with pytest.raises(ValueError):
        laguerre_log_at_negative(3, -1.0)
    with pytest.raises(ValueError):
        LaguerreBasis(0)
    with pytest.raises(ValueError):
        LaguerreBasis(3, alpha=-1.5)


def test_small_degree_roots():
    assert laguerre_roots(1).roots == pytest.approx([0.5], abs=1e-15)
    r6 = math.sqrt(6.0)
    assert laguerre_roots(2).roots == pytest.approx([(3 - r6) / 2, (3 + r6) / 2], rel=1e-14)


def test_degree_twenty_residual():
    rs = laguerre_roots(20)
    assert len(rs) == 20
    assert (rs.roots > 0).all() and (np.diff(rs.roots) > 0).all()
    assert rs.residuals.max() < 1e-10
    # residual recomputed from the extended-precision series
    for xi in rs.roots[::5]:
        val = laguerre_series(20, -0.5, xi)
        h = 1e-6 * xi
        der = (laguerre_series(20, -0.5, xi + h) - laguerre_series(20, -0.5, xi - h)) / (2 * h)
        assert abs(float(val / (der * xi))) < 1e-10


@pytest.mark.parametrize("n", [3, 10, 30])
def test_roots_against_polyroots(n):
    assert laguerre_roots(n).roots == pytest.approx(laguerre_roots_mp(n), rel=1e-12)


@pytest.mark.parametrize("n", [50, 120, 200])
def test_roots_against_scipy(n):
    ref, _ = roots_genlaguerre(n, -0.5)
    assert laguerre_roots(n).roots == pytest.approx(ref, rel=1e-11)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=201))
def test_interlacing_and_trace(n):
    a = laguerre_roots(n).roots
    b = laguerre_roots(n - 1).roots
    assert (a[:-1] < b).all() and (b < a[1:]).all()
    # trace of the Jacobi matrix is n (n + alpha)
    assert a.sum() == pytest.approx(n * (n - 0.5), rel=1e-12)


def test_large_degree_converges():
    rs = laguerre_roots(1000)
    assert rs.residuals.max() < 1e-10
    assert rs.roots.sum() == pytest.approx(1000 * 999.5, rel=1e-12)


def test_roots_are_read_only():
    rs = laguerre_roots(10)
    with pytest.raises(ValueError):
        rs.roots[0] = 1.0


def test_budget_exhaustion_raises(monkeypatch):
    from charge2 import orthopoly

    monkeypatch.setattr(orthopoly, "ITER_PER_DEGREE", 0)
    orthopoly._cached_roots.cache_clear()
    try:
        with pytest.raises(RootFindingError):
            laguerre_roots(17)
    finally:
        orthopoly._cached_roots.cache_clear()
