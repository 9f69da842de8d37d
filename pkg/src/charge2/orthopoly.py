"""Generalized Laguerre polynomials L_n^alpha: log-space evaluation at negative
arguments and roots from the Jacobi matrix of the orthogonality measure.

The line ensemble only ever needs L_n^{-1/2}(-y) for y > 0, where the
polynomial is a sum of positive terms and can be astronomically large, and
the n positive roots xi_{k,n}.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels

LINE_ALPHA = -0.5

EIG_RTOL = 1e-14
ITER_PER_DEGREE = 100


class RootFindingError(RuntimeError):
    """The tridiagonal eigensolver did not converge within its budget."""


@dataclass(frozen=True)
class LaguerreBasis:
    n: int
    alpha: float = LINE_ALPHA

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"degree must be a positive integer, got {self.n!r}")
        if not self.alpha > -1:
            raise ValueError(f"alpha must exceed -1, got {self.alpha!r}")

    def jacobi_matrix(self):
        """Diagonal and squared off-diagonal of the symmetric Jacobi matrix."""
        k = np.arange(self.n, dtype=float)
        diag = 2.0 * k + self.alpha + 1.0
        offsq = k[1:] * (k[1:] + self.alpha)
        return diag, offsq


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    residuals: np.ndarray

    def __len__(self):
        return self.roots.shape[0]


def laguerre_log_at_negative(n, y, alpha=LINE_ALPHA):
    """Return ``log L_n^alpha(-y)``.

    Uses the three-term recurrence on rescaled values, so the result is finite
    for any degree and argument even when ``L_n(-y)`` itself overflows.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"degree must be a non-negative integer, got {n!r}")
    if not y >= 0:
        raise ValueError(f"argument y must be non-negative, got {y!r}")
    return float(kernels.laguerre_log_neg(int(n), float(alpha), float(y)))


def _polish(n, alpha, roots):
    """One Newton step per root, kept only if it stays between neighbouring midpoints."""
    delta = kernels.laguerre_newton_deltas(n, alpha, roots)
    lo = np.empty_like(roots)
    hi = np.empty_like(roots)
    lo[0] = 0.0
    lo[1:] = 0.5 * (roots[1:] + roots[:-1])
    hi[-1] = np.inf
    hi[:-1] = lo[1:]
    cand = roots - delta
    ok = (cand > lo) & (cand < hi)
    return np.where(ok, cand, roots)


def laguerre_roots(n, alpha=LINE_ALPHA):
    """All n roots of L_n^alpha, ascending, with relative Newton residuals.

    The residual at a root is |L_n(xi)| / |xi L_n'(xi)|.
    """
    basis = LaguerreBasis(n, alpha)
    return _cached_roots(basis.n, float(basis.alpha))


@lru_cache(maxsize=64)
def _cached_roots(n, alpha):
    diag, offsq = LaguerreBasis(n, alpha).jacobi_matrix()
    vals, iters = kernels.tridiag_eigvalsh(diag, offsq, EIG_RTOL, ITER_PER_DEGREE * n)
    if (iters < 0).any():
        bad = int((iters < 0).sum())
        raise RootFindingError(f"bisection budget exhausted for {bad} of {n} roots of L_{n}")
    roots = _polish(n, alpha, np.asarray(vals, dtype=float))
    residuals = np.abs(kernels.laguerre_newton_deltas(n, alpha, roots)) / roots
    roots.setflags(write=False)
    residuals.setflags(write=False)
    return RootSet(roots, residuals)
