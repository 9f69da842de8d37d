"""Exact finite-n laws of doubled Bernoulli sums ``2 * sum_k Bernoulli(p_k)``.

Both unit-charge counts (line and circle) have this form, so everything here
works on a :class:`DoubledBernoulliModel` regardless of where the
probabilities came from.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import ndtr

from . import kernels

PMF_CAP = 5000
_SAMPLE_BLOCK_CELLS = 1 << 22


class CapExceededError(ValueError):
    pass


@dataclass(frozen=True)
class DoubledBernoulliModel:
    """Law of ``2 * sum_k X_k`` with independent ``X_k ~ Bernoulli(probs[k])``."""

    probs: np.ndarray
    label: str = "model"

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).ravel()
        if p.size == 0:
            raise ValueError("model needs at least one factor")
        if not ((p > 0) & (p < 1)).all():
            raise ValueError("success probabilities must lie strictly inside (0, 1)")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def n(self):
        return self.probs.shape[0]

    def log_mgf(self, z):
        """log E[exp(z * count)], summed factor by factor (real or complex z)."""
        z = np.asarray(z)
        p = self.probs
        if np.iscomplexobj(z):
            terms = np.log1p(p * np.expm1(2.0 * z[..., None]))
        else:
            # log(1 - p + p e^{2z}) without overflow for large positive z
            terms = np.logaddexp(np.log1p(-p), np.log(p) + 2.0 * z[..., None])
        out = terms.sum(axis=-1)
        return out if out.ndim else out[()]


@dataclass(frozen=True)
class CumulantTriple:
    kappa1: float
    kappa2: float
    kappa3: float

    def as_tuple(self):
        return (self.kappa1, self.kappa2, self.kappa3)


@dataclass(frozen=True)
class ExactPmf:
    """``mass[j] = P[count = 2 j]`` for j = 0..n."""

    n: int
    mass: np.ndarray = field(repr=False)

    @property
    def values(self):
        return 2 * np.arange(self.n + 1)

    def mean(self):
        return float(np.dot(self.values, self.mass))

    def variance(self):
        m = self.mean()
        return float(np.dot((self.values - m) ** 2, self.mass))

    def cdf(self):
        return np.cumsum(self.mass)


def exact_pmf(model, cap=PMF_CAP):
    """Convolve the factors ``(1 - p) + p t^2``; O(n^2)."""
    if model.n > cap:
        raise CapExceededError(f"n={model.n} exceeds the PMF cap {cap}")
    mass = np.asarray(kernels.bernoulli_pmf(np.ascontiguousarray(model.probs)), dtype=float)
    np.clip(mass, 0.0, None, out=mass)
    mass.setflags(write=False)
    return ExactPmf(model.n, mass)


def exact_cumulants(model):
    p = model.probs
    q = 1.0 - p
    return CumulantTriple(
        kappa1=float(2.0 * p.sum()),
        kappa2=float(4.0 * (p * q).sum()),
        kappa3=float(8.0 * (p * q * (q - p)).sum()),
    )


def mgf_numeric_cumulants(logmgf, h=1e-2):
    """First three derivatives of a cumulant generating function at 0.

    Fourth-order central stencils; meant as an independent cross-check.
    """
    if not 0 < h <= 0.1:
        raise ValueError(f"step must lie in (0, 0.1], got {h!r}")
    f = {k: float(logmgf(k * h)) for k in (-3, -2, -1, 0, 1, 2, 3)}
    k1 = (-f[2] + 8 * f[1] - 8 * f[-1] + f[-2]) / (12 * h)
    k2 = (-f[2] + 16 * f[1] - 30 * f[0] + 16 * f[-1] - f[-2]) / (12 * h * h)
    k3 = (-f[3] + 8 * f[2] - 13 * f[1] + 13 * f[-1] - 8 * f[-2] + f[-3]) / (8 * h**3)
    return CumulantTriple(k1, k2, k3)


def _thread_cap():
    raw = os.environ.get("CHARGE2_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return os.cpu_count() or 1


def sample(model, count, seed):
    """Draw ``count`` values of the count by direct Bernoulli simulation.

    Blocks of rows use child streams of ``SeedSequence(seed)``, so the result
    depends on the seed only, not on how many threads ran the blocks.
    """
    if count < 1:
        raise ValueError("count must be positive")
    n = model.n
    rows = max(1, _SAMPLE_BLOCK_CELLS // n)
    nblocks = -(-count // rows)
    children = np.random.SeedSequence(int(seed)).spawn(nblocks)
    p = model.probs

    def block(i):
        size = min(rows, count - i * rows)
        rng = np.random.Generator(np.random.PCG64(children[i]))
        return 2 * (rng.random((size, n)) < p).sum(axis=1)

    workers = min(_thread_cap(), nblocks)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(block, range(nblocks)))
    else:
        parts = [block(i) for i in range(nblocks)]
    return np.concatenate(parts).astype(np.int64)


def kolmogorov_distance_to_normal(pmf, mean=None, var=None):
    """Exact sup |F - Phi| between the standardized lattice law and N(0, 1).

    Both one-sided limits of F are compared at every atom, since the supremum
    over a step function against a continuous CDF sits at a jump.
    """
    mean = pmf.mean() if mean is None else mean
    var = pmf.variance() if var is None else var
    if not var > 0:
        raise ValueError("degenerate law: variance must be positive")
    s = (pmf.values - mean) / math.sqrt(var)
    phi = ndtr(s)
    right = np.minimum(np.cumsum(pmf.mass), 1.0)
    left = np.concatenate([[0.0], right[:-1]])
    return float(max(np.abs(right - phi).max(), np.abs(left - phi).max()))


def _side_mask(values, threshold, side):
    if side in (">=", "ge"):
        return values >= threshold
    if side in ("<=", "le"):
        return values <= threshold
    raise ValueError(f"side must be '>=' or '<=', got {side!r}")


def tail_probability(pmf, threshold, side=">="):
    mask = _side_mask(pmf.values, threshold, side)
    return float(min(1.0, pmf.mass[mask].sum()))


def log_tail_probability(model, threshold, side=">="):
    """log P[count >= threshold] (or <=) without underflow.

    Exponential tilting by theta with tilted mean at the threshold: the
    tilted model is again a doubled Bernoulli sum, and
    P[A] = M(theta) * E_theta[exp(-theta count); A].
    """
    values = 2 * np.arange(model.n + 1)
    mask = _side_mask(values, threshold, side)
    if not mask.any():
        return -math.inf
    if mask.all():
        return 0.0
    theta = _tilt_for_mean(model.probs, min(max(threshold, 1.0), 2 * model.n - 1.0))
    logp = np.log(model.probs) + 2.0 * theta
    tilted = np.exp(logp - np.logaddexp(np.log1p(-model.probs), logp))
    tilted = np.clip(tilted, 1e-300, 1 - 1e-16)
    mass = np.asarray(kernels.bernoulli_pmf(np.ascontiguousarray(tilted)))
    with np.errstate(divide="ignore"):
        logw = np.log(mass[mask]) - theta * values[mask]
    top = logw.max()
    return float(model.log_mgf(theta) + top + math.log(np.exp(logw - top).sum()))


def _tilt_for_mean(p, target):
    logit = np.log(p) - np.log1p(-p)

    def tilted_mean(theta):
        return 2.0 * (1.0 / (1.0 + np.exp(-(logit + 2.0 * theta)))).sum() - target

    lo, hi = -1.0, 1.0
    while tilted_mean(lo) > 0:
        lo *= 2
    while tilted_mean(hi) < 0:
        hi *= 2
    return brentq(tilted_mean, lo, hi, xtol=1e-12)
