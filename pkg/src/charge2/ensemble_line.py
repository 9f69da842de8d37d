"""Two-charge ensemble on the real line (harmonic potential).

U_n, the number of unit charges at total charge N = 2n, has moment
generating function ``L_n(-X^2 e^{2z}) / L_n(-X^2)`` with L_n = L_n^{-1/2}.
Three routes to log E[exp(z U_n)] live here: the Laguerre ratio, the
factorized Bernoulli product over the Laguerre roots, and a Laplace-type
integral evaluated by quadrature. They must agree; that is the point.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .exact_dist import DoubledBernoulliModel
from .orthopoly import laguerre_log_at_negative, laguerre_roots

INTEGRAL_CAP = 200


class QuadratureError(RuntimeError):
    """Quadrature of the Laplace integral failed to converge."""


@dataclass(frozen=True)
class ScaledFugacity:
    """X = sqrt(2 n gamma)."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")

    def label(self):
        return f"line-scaled(gamma={self.gamma!r})"


@dataclass(frozen=True)
class UnitFugacity:
    """X = 1."""

    def label(self):
        return "line-unit"


@dataclass(frozen=True)
class LineEnsemble:
    n: int
    regime: object

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.regime, (ScaledFugacity, UnitFugacity)):
            raise TypeError("regime must be ScaledFugacity or UnitFugacity")

    @property
    def X2(self):
        """Squared fugacity."""
        if isinstance(self.regime, ScaledFugacity):
            return 2.0 * self.n * self.regime.gamma
        return 1.0

    @property
    def X(self):
        return math.sqrt(self.X2)


def line_model(ens):
    """Bernoulli probabilities X^2 / (X^2 + xi_k) over the roots of L_n."""
    xi = laguerre_roots(ens.n).roots
    probs = 1.0 / (1.0 + xi / ens.X2)
    return DoubledBernoulliModel(probs, label=f"{ens.regime.label()}, n={ens.n}")


def line_mgf_laguerre(ens, z):
    """log E[exp(z U_n)] as a ratio of Laguerre values at negative arguments."""
    X2 = ens.X2
    return laguerre_log_at_negative(ens.n, X2 * math.exp(2.0 * z)) - laguerre_log_at_negative(ens.n, X2)


def line_mgf_product(model, z):
    """log E[exp(z U_n)] from the factorized law: sum_k log(1 - p_k + p_k e^{2z})."""
    return float(model.log_mgf(float(z)))


def _log_half_integral(N, g, sign):
    """log of int_0^inf exp(N log u - N g (sign * 2u + u^2)) du.

    ``sign=+1`` is the s > 0 half of the integral, ``sign=-1`` the reflected
    s < 0 half. The integrand is normalized by its peak value before quad.
    """
    # stationary point solves 2 g u^2 + sign * 2 g u - 1 = 0
    u0 = (-sign * g + math.sqrt(g * g + 2.0 * g)) / (2.0 * g)

    def expo(u):
        return N * math.log(u) - N * g * (sign * 2.0 * u + u * u)

    peak = expo(u0)
    width = 1.0 / math.sqrt(N * (1.0 / (u0 * u0) + 2.0 * g))
    lo = max(0.0, u0 - 60.0 * width)
    hi = u0 + 60.0 * width

    def integrand(u):
        if u <= 0.0:
            return 0.0
        return math.exp(expo(u) - peak)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(integrand, lo, hi, points=[u0], epsabs=0.0, epsrel=1e-13, limit=400)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature did not converge (N={N}, g={g}): {exc}") from exc
    if not val > 0 or err > 1e-10 * val:
        raise QuadratureError(f"quadrature error too large (N={N}, g={g}, value={val}, err={err})")
    return peak + math.log(val)


def log_laplace_integral(N, g):
    """log I_N(g) with I_N(g) = int_R s^N exp(-N g (2 s + s^2)) ds, N even."""
    return float(np.logaddexp(_log_half_integral(N, g, +1), _log_half_integral(N, g, -1)))


def line_mgf_integral(n, gamma, z, cap=INTEGRAL_CAP):
    """log E[exp(z U_n)] for X^2 = 2 n gamma via the Laplace integral identity.

    E[e^{zU_n}] = e^{(N+1)z} e^{-N gamma (e^{2z} - 1)} I_N(gamma e^{2z}) / I_N(gamma).
    """
    if n > cap:
        raise ValueError(f"n={n} exceeds the quadrature cap {cap}")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    N = 2 * n
    g = gamma * math.exp(2.0 * z)
    return (N + 1) * z - N * gamma * math.expm1(2.0 * z) + log_laplace_integral(N, g) - log_laplace_integral(N, gamma)
