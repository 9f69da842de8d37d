import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charge2.ensemble_circle import CircleEnsemble, circle_model
from charge2.exact_dist import (
    CapExceededError,
    DoubledBernoulliModel,
    exact_cumulants,
    exact_pmf,
    kolmogorov_distance_to_normal,
    log_tail_probability,
    mgf_numeric_cumulants,
    sample,
    tail_probability,
)

from oracles import brute_pmf, poly_pmf

probs_st = st.lists(st.floats(0.001, 0.999), min_size=1, max_size=60)


def test_fair_single_factor():
    pmf = exact_pmf(DoubledBernoulliModel([0.5]))
    assert list(pmf.values) == [0, 2]
    assert pmf.mass == pytest.approx([0.5, 0.5], abs=1e-16)


def test_two_factor_convolution():
    pmf = exact_pmf(DoubledBernoulliModel([4 / 5, 4 / 13]))
    expect = [(1 / 5) * (9 / 13), (4 / 5) * (9 / 13) + (1 / 5) * (4 / 13), (4 / 5) * (4 / 13)]
    assert pmf.mass == pytest.approx(expect, abs=1e-16)
    assert tail_probability(pmf, 4, ">=") == pytest.approx(16 / 65, abs=1e-16)


@pytest.mark.parametrize("seed", range(4))
def test_pmf_against_enumeration(seed):
    p = np.random.default_rng(seed).uniform(0.02, 0.98, 12)
    assert exact_pmf(DoubledBernoulliModel(p)).mass == pytest.approx(brute_pmf(p), abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(probs_st)
def test_pmf_invariants(p):
    model = DoubledBernoulliModel(p)
    pmf = exact_pmf(model)
    c = exact_cumulants(model)
    assert abs(pmf.mass.sum() - 1.0) < 1e-12
    assert (pmf.mass >= 0).all()
    assert pmf.mass == pytest.approx(poly_pmf(p), abs=1e-13)
    assert pmf.mean() == pytest.approx(c.kappa1, abs=1e-9 * max(1, c.kappa1))
    assert pmf.variance() == pytest.approx(c.kappa2, abs=1e-9 * max(1, c.kappa2))
    third = float(np.dot((pmf.values - pmf.mean()) ** 3, pmf.mass))
    assert third == pytest.approx(c.kappa3, abs=1e-8 * max(1, len(p)))


def test_model_validation():
    for bad in ([], [0.0], [1.0], [0.5, 1.2], [float("nan")]):
        with pytest.raises(ValueError):
            DoubledBernoulliModel(bad)


def test_pmf_cap():
    with pytest.raises(CapExceededError):
        exact_pmf(DoubledBernoulliModel(np.full(11, 0.5)), cap=10)


def test_cumulant_examples():
    assert exact_cumulants(DoubledBernoulliModel([0.5])).as_tuple() == pytest.approx((1.0, 1.0, 0.0), abs=1e-15)
    assert exact_cumulants(DoubledBernoulliModel([2 / 3])).as_tuple() == pytest.approx((4 / 3, 8 / 9, -16 / 27), abs=1e-15)
    c = exact_cumulants(circle_model(CircleEnsemble(200, 1.0)))
    assert abs(c.kappa1 / 200 - math.pi / 2) < 0.02


def test_numeric_cumulants():
    fair = DoubledBernoulliModel([0.5])
    assert mgf_numeric_cumulants(lambda z: float(fair.log_mgf(z))).as_tuple() == pytest.approx((1, 1, 0), abs=1e-6)
    assert mgf_numeric_cumulants(lambda z: z * z / 2).as_tuple() == pytest.approx((0, 1, 0), abs=1e-8)
    assert mgf_numeric_cumulants(math.expm1).as_tuple() == pytest.approx((1, 1, 1), abs=1e-6)
    with pytest.raises(ValueError):
        mgf_numeric_cumulants(math.expm1, h=0.5)


def test_complex_log_mgf_matches_real():
    model = DoubledBernoulliModel(np.linspace(0.1, 0.9, 9))
    assert complex(model.log_mgf(0.3 + 0j)).real == pytest.approx(float(model.log_mgf(0.3)), abs=1e-14)


def test_sample_near_degenerate():
    draws = sample(DoubledBernoulliModel(np.full(5, 0.999999)), 1000, 1)
    assert (draws == 10).mean() > 0.99


def test_sample_mean_band():
    draws = sample(DoubledBernoulliModel([0.5]), 100_000, 2024)
    assert abs(draws.mean() - 1.0) < 4 * math.sqrt(1 / 100_000)


def test_sample_support_and_determinism():
    model = circle_model(CircleEnsemble(30, 0.8))
    a = sample(model, 500, 77)
    assert (a % 2 == 0).all() and a.min() >= 0 and a.max() <= 60
    assert np.array_equal(a, sample(model, 500, 77))
    assert not np.array_equal(a, sample(model, 500, 78))


def test_sample_total_variation():
    model = circle_model(CircleEnsemble(20, 1.0))
    draws = sample(model, 200_000, 5)
    emp = np.bincount(draws // 2, minlength=21) / draws.size
    assert 0.5 * np.abs(emp - exact_pmf(model).mass).sum() < 0.01


def test_sample_independent_of_threads():
    code = ("from charge2.exact_dist import sample, DoubledBernoulliModel;"
            "import numpy as np;"
            "print(sample(DoubledBernoulliModel(np.full(3000, 0.3)), 4000, 9).sum())")
    outs = set()
    for t in ("1", "4"):
        env = dict(os.environ, CHARGE2_THREADS=t)
        outs.add(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout)
    assert len(outs) == 1


def test_kolmogorov_two_atoms():
    d = kolmogorov_distance_to_normal(exact_pmf(DoubledBernoulliModel([0.5])))
    assert d == pytest.approx(0.3413447460685429, abs=1e-12)


def test_kolmogorov_shrinks():
    d = [kolmogorov_distance_to_normal(exact_pmf(circle_model(CircleEnsemble(n, 1.0)))) for n in (100, 400)]
    assert d[1] < d[0]


def test_kolmogorov_rejects_degenerate():
    from charge2.exact_dist import ExactPmf

    with pytest.raises(ValueError):
        kolmogorov_distance_to_normal(ExactPmf(2, np.array([0.0, 1.0, 0.0])))


def test_tail_edges():
    pmf = exact_pmf(DoubledBernoulliModel([0.5]))
    assert tail_probability(pmf, -3, ">=") == 1.0
    assert tail_probability(pmf, 2, ">=") == 0.5
    assert tail_probability(pmf, 0, "<=") == 0.5
    with pytest.raises(ValueError):
        tail_probability(pmf, 0, ">")


@pytest.mark.parametrize("thr,side", [(30, ">="), (80, ">="), (10, "<="), (2, "<=")])
def test_log_tail_matches_linear(thr, side):
    model = circle_model(CircleEnsemble(40, 0.6))
    ref = math.log(tail_probability(exact_pmf(model), thr, side))
    assert log_tail_probability(model, thr, side) == pytest.approx(ref, rel=1e-10)


def test_log_tail_far_out():
    # linear-space tail underflows; tilted computation does not
    model = circle_model(CircleEnsemble(2000, 1.0))
    assert log_tail_probability(model, 4000, ">=") == pytest.approx(np.log(model.probs).sum(), rel=1e-13)
    small = circle_model(CircleEnsemble(2000, 0.2))
    assert tail_probability(exact_pmf(small), 3000, ">=") == 0.0
    v = log_tail_probability(small, 3000, ">=")
    assert math.isfinite(v) and v < -745
    assert log_tail_probability(model, 4001, ">=") == -math.inf
    assert log_tail_probability(model, -1, ">=") == 0.0
