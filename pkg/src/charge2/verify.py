"""Finite-n verification sweeps that back ``charge2 verify``.

Each check compares an exact finite-n quantity with a limit prediction and
yields one :class:`CheckRecord`. Absolute checks carry a tolerance (scaled by
``tol_scale``); trend checks compare consecutive sizes of the sweep, since
the asymptotic statements come without rates.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import limit_theory as lt
from .ensemble_circle import CircleEnsemble, circle_mgf
from .ensemble_line import (
    INTEGRAL_CAP,
    LineEnsemble,
    ScaledFugacity,
    UnitFugacity,
    line_mgf_integral,
    line_mgf_laguerre,
)
from .exact_dist import exact_cumulants, exact_pmf, mgf_numeric_cumulants, sample

# anchor -> what it ties the check to; README's check index lists the same keys
ANCHORS = {
    "plumbing": "internal consistency of the exact engine",
    "pgf-factorization": "generating function as a product of (1 - p_k) + p_k t^2 factors",
    "laguerre-mgf": "line MGF as a ratio of Laguerre values at negative arguments",
    "laplace-integral": "line MGF through the Laplace-type integral identity",
    "cumulant-limits": "limiting rates of mean, variance and third cumulant",
    "third-cumulant-candidates": "which closed form of the line third-cumulant rate the exact values reach",
    "psi-exponent": "cubic coefficient of the line-scaled limiting residual",
    "limiting-cgf": "convergence of the normalized log-MGF to its limit",
    "ldp": "large deviation rate function at its speed",
    "rate-boundary": "circle rate function limit at x = 0",
    "mod-gaussian": "mod-Gaussian residual psi_n -> psi",
    "precise-deviations": "tail at scale t_n x against its leading term",
    "berry-esseen": "Kolmogorov distance against C / t_n^{3/2}",
    "zone-of-control": "bound on |psi_n(i xi) - 1| over [-D t_n, D t_n]",
    "cumulant-bounds": "|kappa_r| <= n r^{r-2} 2^{r-1} 2^r for the centered count",
    "local-limit": "local limit theorem with lattice span 2",
    "monte-carlo": "seeded sampler against the exact law",
}

LOCAL_LIMIT_ATOMS = 21
MC_COUNT = 20000


@dataclass
class CheckRecord:
    check: str
    anchor: str
    n: int
    value: float
    predicted: float
    abs_error: float
    rel_error: float
    tolerance: float | None
    verdict: str
    note: str = ""

    def as_dict(self):
        return asdict(self)


def _absolute(check, anchor, n, value, predicted, tol, note=""):
    err = abs(value - predicted)
    rel = err / abs(predicted) if predicted != 0 else math.inf if err else 0.0
    return CheckRecord(check, anchor, n, float(value), float(predicted), float(err), float(rel), float(tol),
                       "pass" if err <= tol else "fail", note)


def _bound(check, anchor, n, value, bound, note=""):
    """value <= bound."""
    return CheckRecord(check, anchor, n, float(value), float(bound), float(max(0.0, value - bound)), 0.0, None,
                       "pass" if value <= bound else "fail", note)


def _trend(check, anchor, n_prev, n, err_prev, err, note=""):
    """Error at n strictly below the error at the previous sweep size."""
    return CheckRecord(check, anchor, n, float(err), float(err_prev), float(err), float(err / err_prev) if err_prev else math.inf,
                       None, "pass" if err < err_prev else "fail", note or f"trend vs n={n_prev}")


@dataclass(frozen=True)
class ModelSpec:
    kind: str  # line-scaled | line-unit | circle
    gamma: float | None = None
    rho: float | None = None

    def profile(self):
        if self.kind == "line-scaled":
            return lt.line_limit_profile(self.gamma)
        if self.kind == "line-unit":
            return lt.line_unit_profile()
        return lt.circle_limit_profile(self.rho)

    def rate(self):
        if self.kind == "line-scaled":
            return lt.line_scaled_rate(self.gamma)
        if self.kind == "line-unit":
            return lt.line_unit_rate()
        return lt.circle_rate(self.rho)

    def closed_logmgf(self, n):
        """log-MGF from the ensemble's own closed form, independent of the factorization."""
        if self.kind == "circle":
            ens = CircleEnsemble(n, self.rho)
            return lambda z: circle_mgf(ens, z)
        regime = ScaledFugacity(self.gamma) if self.kind == "line-scaled" else UnitFugacity()
        ens = LineEnsemble(n, regime)
        return lambda z: line_mgf_laguerre(ens, z)

    def limit_cgf(self, z):
        if self.kind == "circle":
            return lt.circle_lambda(self.rho, z)
        if self.kind == "line-scaled":
            return lt.line_lambda(self.gamma, z)
        return math.expm1(z)

    def ldp_points(self):
        r = self.rate()
        x0 = r.minimizer
        if self.kind == "line-unit":
            return (0.5, 2.0)
        hi = r.domain[1]
        return (round(0.65 * x0, 6), round(x0 + 0.7 * (hi - x0), 6))

    def as_dict(self):
        d = {"kind": self.kind}
        if self.gamma is not None:
            d["gamma"] = self.gamma
        if self.rho is not None:
            d["rho"] = self.rho
        return d


def run_checks(spec, ns, seed=0, tol_scale=1.0):
    """All checks for ``spec`` across the sweep ``ns``; returns a list of records."""
    ns = sorted(set(int(n) for n in ns))
    prof = spec.profile()
    rate = spec.rate()
    recs = []
    tol = lambda t: t * tol_scale  # noqa: E731
    limits = (prof.mean_rate, prof.var_rate, prof.kappa_rate)
    per_n = {}

    for n in ns:
        model = prof.model_factory(n)
        pmf = exact_pmf(model)
        cum = exact_cumulants(model)
        norm = prof.normalizer(n)
        info = per_n[n] = {}

        recs.append(_absolute("pmf-normalization", "plumbing", n, pmf.mass.sum(), 1.0, tol(1e-12)))
        recs.append(_absolute("pmf-mean", "plumbing", n, pmf.mean(), cum.kappa1, tol(1e-9 * max(1.0, cum.kappa1))))
        recs.append(_absolute("pmf-variance", "plumbing", n, pmf.variance(), cum.kappa2, tol(1e-9 * max(1.0, cum.kappa2))))

        # rounding noise of an n-term sum grows with n and the third
        # difference amplifies it by 1/h^3, hence the faster growth for r = 3
        num = mgf_numeric_cumulants(spec.closed_logmgf(n), h=1e-2)
        grow = max(1.0, n / 100.0)
        for r, (a, b) in enumerate(zip(cum.as_tuple(), num.as_tuple()), start=1):
            t = 1e-6 * (grow * grow if r == 3 else grow)
            recs.append(_absolute(f"cumulant{r}-vs-closed-mgf", "pgf-factorization", n, b, a, tol(t)))

        z_grid = np.linspace(-1.0, 1.0, 21)
        closed = spec.closed_logmgf(n)
        gap = max(abs(closed(z) - float(model.log_mgf(z))) for z in z_grid)
        anchor = "pgf-factorization" if spec.kind == "circle" else "laguerre-mgf"
        recs.append(_absolute("mgf-closed-vs-product", anchor, n, gap, 0.0, tol(1e-8 * max(1.0, n / 100.0))))
        if spec.kind == "line-scaled" and n <= INTEGRAL_CAP:
            gap = max(abs(closed(z) - line_mgf_integral(n, spec.gamma, z)) for z in z_grid)
            recs.append(_absolute("mgf-laguerre-vs-integral", "laplace-integral", n, gap, 0.0, tol(1e-8)))

        rates = [c / norm for c in cum.as_tuple()]
        info["rate_err"] = [abs(a - b) for a, b in zip(rates, limits)]
        spd = n if spec.kind == "circle" else (2 * n if spec.kind == "line-scaled" else 2 * math.sqrt(n))
        info["cgf_err"] = max(abs(closed(z) / spd - spec.limit_cgf(z)) for z in (-1.0, 1.0))

        pts = spec.ldp_points()
        info["ldp"] = [lt.ldp_tail_check(rate, model, n, x, norm) for x in pts]

        info["mg_err"] = lt.residual_error(prof, n)
        if spec.kind != "line-unit":
            info["pd_ratio"] = lt.precise_deviation_ratio(prof, n, 0.5, pmf=pmf)

            be = lt.berry_esseen_check(prof, n, pmf=pmf)
            info["dkol"] = be.d_kol
            recs.append(_bound("berry-esseen-bound", "berry-esseen", n, be.d_kol, be.bound,
                               note=f"C={be.constant!r}, t_n={be.tn!r}"))

            zr = lt.zone_of_control_check(model, n, lt.CONTROL_D, lt.CONTROL_K, lt.CONTROL_K,
                                          lt.CONTROL_V, lt.CONTROL_W, 1.0)
            recs.append(CheckRecord("zone-of-control", "zone-of-control", n, zr.max_ratio, 1.0,
                                    0.0, 0.0, None, "pass" if zr.passed else "fail",
                                    f"violations={zr.violations}, half-width={zr.halfwidth!r}"))

            k4 = _centered_kappa4(model)
            for r, k in zip((2, 3, 4), (cum.kappa2, cum.kappa3, k4)):
                bound = n * r ** (r - 2) * 2 ** (r - 1) * 2**r
                recs.append(_bound(f"cumulant{r}-bound", "cumulant-bounds", n, abs(k), bound))

        if n == ns[0]:
            draws = sample(model, MC_COUNT, seed)
            band = 4.0 * math.sqrt(cum.kappa2 / MC_COUNT)
            recs.append(_absolute("sample-mean", "monte-carlo", n, draws.mean(), cum.kappa1, tol(band),
                                  note=f"count={MC_COUNT}, seed={seed}"))
            if n <= 50:
                hist = np.bincount(draws // 2, minlength=n + 1) / MC_COUNT
                tv = 0.5 * np.abs(hist - pmf.mass).sum()
                recs.append(_absolute("sample-total-variation", "monte-carlo", n, tv, 0.0, tol(0.02)))

    # absolute checks at the largest size, trend checks along the sweep
    n_top = ns[-1]
    top = per_n[n_top]
    if spec.kind != "line-unit":
        model = prof.model_factory(n_top)
        cum = exact_cumulants(model)
        norm = prof.normalizer(n_top)
        for r, (c, lim) in enumerate(zip(cum.as_tuple(), limits), start=1):
            recs.append(_absolute(f"kappa{r}-rate", "cumulant-limits", n_top, c / norm, lim, tol(0.02)))
        for chk in top["ldp"]:
            recs.append(_absolute(f"ldp-x={chk.x!r}", "ldp", n_top, chk.empirical, chk.rate, tol(0.05),
                                  note=f"tail side {chk.side}"))
        # the window must hold many atoms yet stay inside one standard
        # deviation of the count; below that size the check is not local
        if LOCAL_LIMIT_ATOMS <= math.sqrt(cum.kappa2):
            h = LOCAL_LIMIT_ATOMS / n_top ** prof.scale_exponent
            ll = lt.local_limit_check(prof, n_top, -h, h)
            recs.append(_absolute("local-limit-constant", "local-limit", n_top, ll.ratio, 1.0, tol(0.15),
                                  note=f"atoms={ll.atoms}, lattice factor={ll.lattice_factor!r}"))

    if spec.kind == "line-scaled":
        c3 = exact_cumulants(prof.model_factory(n_top)).kappa3 / (2 * n_top)
        t = lt.t0(spec.gamma)
        d_err = abs(c3 - lt.line_kappa_derived(t))
        p_err = abs(c3 - lt.line_kappa_printed(t))
        recs.append(_bound("third-cumulant-derived-closer", "third-cumulant-candidates", n_top, d_err, p_err,
                           note=f"printed-form error {p_err!r}"))
        div = lt.select_line_psi_divisor(spec.gamma, n_top)
        recs.append(CheckRecord("psi-divisor", "psi-exponent", n_top, float(div), 3.0, float(abs(div - 3)), 0.0, None,
                                "pass" if div == 3 else "fail", "kappa per 2n, psi = exp(kappa z^3 / 3)"))

    if spec.kind == "circle":
        b = lt.circle_rate_boundary(spec.rho)
        recs.append(_absolute("rate-at-zero", "rate-boundary", 0, b.computed, b.closed_form, tol(1e-8),
                              note=f"printed value {b.printed!r} has the opposite sign"))

    for prev, n in zip(ns, ns[1:]):
        a, b = per_n[prev], per_n[n]
        for r in range(3):
            recs.append(_trend(f"kappa{r + 1}-rate-trend", "cumulant-limits", prev, n, a["rate_err"][r], b["rate_err"][r]))
        recs.append(_trend("limiting-cgf-trend", "limiting-cgf", prev, n, a["cgf_err"], b["cgf_err"]))
        for ca, cb in zip(a["ldp"], b["ldp"]):
            if not (math.isfinite(ca.error) and math.isfinite(cb.error)):
                continue  # the tail event is empty at the smaller size
            recs.append(_trend(f"ldp-x={cb.x!r}-trend", "ldp", prev, n, ca.error, cb.error))
        recs.append(_trend("mod-gaussian-trend", "mod-gaussian", prev, n, a["mg_err"], b["mg_err"]))
        if spec.kind != "line-unit":
            recs.append(_trend("precise-deviation-trend", "precise-deviations", prev, n,
                               abs(a["pd_ratio"] - 1.0), abs(b["pd_ratio"] - 1.0)))
            recs.append(_trend("kolmogorov-trend", "berry-esseen", prev, n, a["dkol"], b["dkol"]))
    return recs


def _centered_kappa4(model):
    p = model.probs
    pq = p * (1.0 - p)
    return float(16.0 * (pq * (1.0 - 6.0 * pq)).sum())
