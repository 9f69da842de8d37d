"""Pure numpy fallbacks for the compiled kernels in ``_ckernels.pyx``.

Same signatures and return conventions. The bisection runs all eigenvalue
indices at once so the Python-level loop is over matrix rows, not roots.
"""

import math

import numpy as np

_SHIFT = 600
_BIG = math.ldexp(1.0, _SHIFT)
_LOG2 = math.log(2.0)
_TINY = np.finfo(float).tiny


def _sturm_counts(diag, offsq, xs, pivmin):
    d = diag[0] - xs
    d = np.where(np.abs(d) < pivmin, -pivmin, d)
    count = (d < 0).astype(np.int64)
    for i in range(1, diag.shape[0]):
        d = diag[i] - xs - offsq[i - 1] / d
        d = np.where(np.abs(d) < pivmin, -pivmin, d)
        count += d < 0
    return count


def tridiag_eigvalsh(diag, offsq, rtol, max_iter):
    diag = np.ascontiguousarray(diag, dtype=float)
    offsq = np.ascontiguousarray(offsq, dtype=float)
    n = diag.shape[0]
    off = np.sqrt(offsq)
    rad = np.zeros(n)
    rad[1:] += off
    rad[:-1] += off
    glo = float(np.min(diag - rad))
    ghi = float(np.max(diag + rad))
    r = max(abs(glo), abs(ghi))
    glo -= 2.2e-16 * r * n + _TINY
    ghi += 2.2e-16 * r * n + _TINY
    pivmin = _TINY * max(1.0, float(offsq.max()) if offsq.size else 1.0)

    k = np.arange(n)
    lo = np.full(n, glo)
    hi = np.full(n, ghi)
    iters = np.zeros(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    while active.any():
        mid = 0.5 * (lo + hi)
        done = (hi - lo <= rtol * np.maximum(np.abs(lo), np.abs(hi))) | (mid <= lo) | (mid >= hi)
        active &= ~done
        over = active & (iters >= max_iter)
        iters[over] = -1
        active &= ~over
        if not active.any():
            break
        idx = np.flatnonzero(active)
        above = _sturm_counts(diag, offsq, mid[idx], pivmin) > k[idx]
        hi[idx] = np.where(above, mid[idx], hi[idx])
        lo[idx] = np.where(above, lo[idx], mid[idx])
        iters[idx] += 1
    return 0.5 * (lo + hi), iters


def laguerre_log_neg(n, alpha, y):
    if n == 0:
        return 0.0
    p0 = 1.0
    p1 = 1.0 + alpha + y
    shifts = 0
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1 + alpha + y) * p1 - (k - 1 + alpha) * p0) / k
        if p1 > _BIG:
            p0 = math.ldexp(p0, -_SHIFT)
            p1 = math.ldexp(p1, -_SHIFT)
            shifts += 1
    return math.log(p1) + shifts * _SHIFT * _LOG2


def laguerre_newton_deltas(n, alpha, xs):
    x = np.ascontiguousarray(xs, dtype=float)
    p0 = np.ones_like(x)
    p1 = 1.0 + alpha - x
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1 + alpha - x) * p1 - (k - 1 + alpha) * p0) / k
        big = np.abs(p1) > _BIG
        if big.any():
            p0 = np.where(big, np.ldexp(p0, -_SHIFT), p0)
            p1 = np.where(big, np.ldexp(p1, -_SHIFT), p1)
    den = n * p1 - (n + alpha) * p0
    safe = np.where(den != 0.0, den, 1.0)
    return np.where(den != 0.0, x * p1 / safe, 0.0)


def bernoulli_pmf(probs):
    probs = np.asarray(probs, dtype=float)
    n = probs.shape[0]
    mass = np.zeros(n + 1)
    mass[0] = 1.0
    for k, p in enumerate(probs):
        head = mass[: k + 2].copy()
        mass[1 : k + 2] = head[1:] * (1.0 - p) + head[:-1] * p
        mass[0] = head[0] * (1.0 - p)
    return mass
