import math

import pytest

from charge2.ensemble_circle import CircleEnsemble, circle_mgf, circle_model
from charge2.limit_theory import circle_lambda


def test_single_factor():
    assert circle_model(CircleEnsemble(1, 0.5)).probs == pytest.approx([0.5], rel=1e-15)


def test_two_factors():
    assert circle_model(CircleEnsemble(2, 0.5)).probs == pytest.approx([4 / 5, 4 / 13], rel=1e-15)


def test_large_rho_saturates():
    p = circle_model(CircleEnsemble(20, 1e6)).probs
    assert p.min() > 1 - 1e-9


def test_huge_fugacity_no_overflow():
    ens = CircleEnsemble(50, 1e200)
    assert math.isfinite(circle_mgf(ens, 3.0))


def test_mgf_values():
    assert circle_mgf(CircleEnsemble(5, 1.3), 0.0) == 0.0
    assert circle_mgf(CircleEnsemble(1, 0.5), math.log(2)) == pytest.approx(math.log(2.5), abs=1e-15)


@pytest.mark.parametrize("rho,z", [(1.0, 0.5), (0.4, -1.0), (3.0, 1.5)])
def test_mgf_matches_factorized(rho, z):
    ens = CircleEnsemble(300, rho)
    assert circle_mgf(ens, z) == pytest.approx(float(circle_model(ens).log_mgf(z)), abs=1e-10)


@pytest.mark.parametrize("z", [-1.0, 0.7])
def test_riemann_sum_limit(z):
    # (1/n) log MGF is a midpoint sum for the limit; error shrinks like 1/n^2
    errs = [abs(circle_mgf(CircleEnsemble(n, 1.0), z) / n - circle_lambda(1.0, z)) for n in (100, 200, 400)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.1)


def test_validation():
    with pytest.raises(ValueError):
        CircleEnsemble(3, 0.0)
    with pytest.raises(ValueError):
        CircleEnsemble(0, 1.0)
