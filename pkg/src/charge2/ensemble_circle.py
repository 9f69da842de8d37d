"""Two-charge ensemble on the unit circle with fugacity X = n rho."""

import math
from dataclasses import dataclass

import numpy as np

from .exact_dist import DoubledBernoulliModel


@dataclass(frozen=True)
class CircleEnsemble:
    n: int
    rho: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho!r}")

    def _log_a(self):
        # log (2 n rho)^2, formed in log space so huge n*rho cannot overflow
        return 2.0 * (math.log(2.0 * self.n) + math.log(self.rho))

    def _log_b(self):
        return 2.0 * np.log(2.0 * np.arange(1, self.n + 1) - 1.0)


def circle_model(ens):
    """p_k = (2 n rho)^2 / ((2 n rho)^2 + (2k - 1)^2), k = 1..n."""
    log_ratio = ens._log_b() - ens._log_a()
    probs = 1.0 / (1.0 + np.exp(log_ratio))
    return DoubledBernoulliModel(probs, label=f"circle(rho={ens.rho!r}), n={ens.n}")


def circle_mgf(ens, z):
    """log E[exp(z V_n)] straight from the product over k.

    Each factor is ((2 n rho e^z)^2 + (2k-1)^2) / ((2 n rho)^2 + (2k-1)^2),
    handled as a difference of log-sum-exps.
    """
    la, lb = ens._log_a(), ens._log_b()
    num = np.logaddexp(la + 2.0 * z, lb)
    den = np.logaddexp(la, lb)
    return float((num - den).sum())
