# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Signatures mirror :mod:`charge2._pykernels`."""

import numpy as np

from libc.math cimport fabs, log, ldexp, fmax
from libc.float cimport DBL_MIN

cdef double _LOG2 = 0.6931471805599453
# rescale by 2**-600 once magnitudes pass 2**600
cdef double _BIG = 4.149515568880993e+180
cdef int _SHIFT = 600


cdef void _sturm_counts(const double[::1] diag, const double[::1] offsq, const double* xs,
                        double* d, long long* count, Py_ssize_t m, double pivmin) noexcept nogil:
    # rows outside, roots inside: the m recurrences are independent, so their
    # divisions pipeline instead of forming one long dependency chain
    cdef Py_ssize_t i, a
    cdef Py_ssize_t n = diag.shape[0]
    cdef double t, di, oi
    for a in range(m):
        t = diag[0] - xs[a]
        if fabs(t) < pivmin:
            t = -pivmin
        d[a] = t
        count[a] = t < 0
    for i in range(1, n):
        di = diag[i]
        oi = offsq[i - 1]
        for a in range(m):
            t = di - xs[a] - oi / d[a]
            if fabs(t) < pivmin:
                t = -pivmin
            d[a] = t
            count[a] += t < 0


def tridiag_eigvalsh(const double[::1] diag, const double[::1] offsq, double rtol,
                     Py_ssize_t max_iter):
    """Eigenvalues of a symmetric tridiagonal matrix by Sturm-count bisection.

    ``offsq`` holds the squared off-diagonal entries. All eigenvalues are
    bisected in lockstep. Returns the ascending eigenvalues and the bisection
    step count per eigenvalue (-1 when the budget ran out before convergence).
    """
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i, k, a, m
    cdef double glo, ghi, r, pivmin, mid
    cdef double bmax = 0.0

    glo = diag[0]
    ghi = diag[0]
    for i in range(n):
        r = 0.0
        if i > 0:
            r += offsq[i - 1] ** 0.5
        if i < n - 1:
            r += offsq[i] ** 0.5
            bmax = fmax(bmax, offsq[i])
        glo = min(glo, diag[i] - r)
        ghi = max(ghi, diag[i] + r)
    r = fmax(fabs(glo), fabs(ghi))
    glo -= 2.2e-16 * r * n + DBL_MIN
    ghi += 2.2e-16 * r * n + DBL_MIN
    pivmin = DBL_MIN * fmax(1.0, bmax)

    lo_a = np.full(n, glo)
    hi_a = np.full(n, ghi)
    iters = np.zeros(n, dtype=np.int64)
    mids_a = np.empty(n)
    work_a = np.empty(n)
    counts_a = np.empty(n, dtype=np.int64)
    idx_a = np.empty(n, dtype=np.intp)
    cdef double[::1] lo = lo_a, hi = hi_a, mids = mids_a, work = work_a
    cdef long long[::1] its = iters, counts = counts_a
    cdef Py_ssize_t[::1] idx = idx_a

    with nogil:
        while True:
            m = 0
            for k in range(n):
                if its[k] < 0:
                    continue
                mid = 0.5 * (lo[k] + hi[k])
                if hi[k] - lo[k] <= rtol * fmax(fabs(lo[k]), fabs(hi[k])) or mid <= lo[k] or mid >= hi[k]:
                    continue
                if its[k] >= max_iter:
                    its[k] = -1
                    continue
                idx[m] = k
                mids[m] = mid
                m += 1
            if m == 0:
                break
            _sturm_counts(diag, offsq, &mids[0], &work[0], &counts[0], m, pivmin)
            for a in range(m):
                k = idx[a]
                if counts[a] > k:
                    hi[k] = mids[a]
                else:
                    lo[k] = mids[a]
                its[k] += 1
    vals = 0.5 * (lo_a + hi_a)
    return vals, iters


def laguerre_log_neg(Py_ssize_t n, double alpha, double y):
    """log L_n^alpha(-y) for y >= 0 by the forward recurrence with 2**k rescaling."""
    cdef Py_ssize_t k
    cdef double p0, p1, p2
    cdef long long shifts = 0
    if n == 0:
        return 0.0
    p0 = 1.0
    p1 = 1.0 + alpha + y
    for k in range(2, n + 1):
        p2 = ((2 * k - 1 + alpha + y) * p1 - (k - 1 + alpha) * p0) / k
        p0 = p1
        p1 = p2
        if p1 > _BIG:
            p0 = ldexp(p0, -_SHIFT)
            p1 = ldexp(p1, -_SHIFT)
            shifts += 1
    return log(p1) + shifts * _SHIFT * _LOG2


def laguerre_newton_deltas(Py_ssize_t n, double alpha, const double[::1] xs):
    """Newton corrections L_n(x) / L_n'(x) at each x (derivative via x L_n' = n L_n - (n+a) L_{n-1})."""
    cdef Py_ssize_t m = xs.shape[0]
    cdef Py_ssize_t j, k
    cdef double p2, den, a1, a0
    res = np.zeros(m, dtype=np.float64)
    prev_a = np.ones(m, dtype=np.float64)
    cur_a = np.empty(m, dtype=np.float64)
    cdef double[::1] out = res, p0 = prev_a, p1 = cur_a
    with nogil:
        for j in range(m):
            p1[j] = 1.0 + alpha - xs[j]
        # degree outside, points inside so the recurrences run side by side
        for k in range(2, n + 1):
            a1 = 2 * k - 1 + alpha
            a0 = k - 1 + alpha
            for j in range(m):
                p2 = ((a1 - xs[j]) * p1[j] - a0 * p0[j]) / k
                p0[j] = p1[j]
                p1[j] = p2
                if fabs(p2) > _BIG:
                    p0[j] = ldexp(p0[j], -_SHIFT)
                    p1[j] = ldexp(p2, -_SHIFT)
        for j in range(m):
            den = n * p1[j] - (n + alpha) * p0[j]
            out[j] = xs[j] * p1[j] / den if den != 0.0 else 0.0
    return res


def bernoulli_pmf(const double[::1] probs):
    """Coefficients of prod_k ((1 - p_k) + p_k s) in increasing powers of s."""
    cdef Py_ssize_t n = probs.shape[0]
    cdef Py_ssize_t j, k
    cdef double p, q
    mass = np.zeros(n + 1, dtype=np.float64)
    cdef double[::1] m = mass
    m[0] = 1.0
    with nogil:
        for k in range(n):
            p = probs[k]
            q = 1.0 - p
            m[k + 1] = m[k] * p
            for j in range(k, 0, -1):
                m[j] = m[j] * q + m[j - 1] * p
            m[0] = m[0] * q
    return mass
