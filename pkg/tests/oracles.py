"""Independent reference computations used only by the tests.

Nothing here calls into charge2; the point is to check the package against
arithmetic done a different way (extended precision series, brute-force
enumeration, plain polynomial multiplication).
"""

import itertools
import math

import mpmath
import numpy as np

mpmath.mp.dps = 50


def laguerre_coeffs(n, alpha):
    """Power-series coefficients c_k of L_n^alpha(x) = sum c_k x^k, in mpmath."""
    a = mpmath.mpf(alpha)
    return [mpmath.binomial(n + a, n - k) * (-1) ** k / mpmath.factorial(k) for k in range(n + 1)]


def laguerre_series(n, alpha, x):
    return mpmath.fsum(c * mpmath.mpf(x) ** k for k, c in enumerate(laguerre_coeffs(n, alpha)))


def log_laguerre_at_negative(n, y, alpha=-0.5):
    return float(mpmath.log(laguerre_series(n, alpha, -mpmath.mpf(y))))


def laguerre_roots_mp(n, alpha=-0.5):
    """Roots from the explicit coefficients by mpmath.polyroots (small n only)."""
    coeffs = laguerre_coeffs(n, alpha)[::-1]
    roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=400)
    return np.sort(np.array([float(mpmath.re(r)) for r in roots]))


def brute_pmf(probs):
    """P[count = 2j] by enumerating all 2^n outcomes."""
    n = len(probs)
    mass = np.zeros(n + 1)
    for bits in itertools.product((0, 1), repeat=n):
        w = 1.0
        for b, p in zip(bits, probs):
            w *= p if b else 1.0 - p
        mass[sum(bits)] += w
    return mass


def poly_pmf(probs):
    """Coefficients of prod_k ((1 - p_k) + p_k t) by numpy polynomial products."""
    out = np.array([1.0])
    for p in probs:
        out = np.polynomial.polynomial.polymul(out, [1.0 - p, p])
    return out


def bernoulli_log_mgf(probs, z):
    return float(sum(math.log(1.0 - p + p * math.exp(2.0 * z)) for p in probs))


def finite_diff(f, x, h=1e-5):
    return (f(x + h) - f(x - h)) / (2.0 * h)
