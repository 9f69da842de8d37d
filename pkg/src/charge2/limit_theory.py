"""Asymptotic objects for the unit-charge counts and their finite-n checks.

Covers limiting cumulant rates, large-deviation rate functions (closed form
and numerical Legendre duals), mod-Gaussian parameters and residuals,
precise-deviation leading terms, the Berry-Esseen constant with its zone of
control, and local-limit predictions.

Regimes:

* line, X^2 = 2 n gamma: rates per 2n, X_n = (U_n - E U_n) / n^{1/3};
* line, X = 1: rates per 2 sqrt(n), X_n = (U_n - 2 sqrt(n)) / n^{1/6};
* circle, X = n rho: rates per n, X_n = (V_n - E V_n) / n^{1/3}.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import xlogy

from .ensemble_circle import CircleEnsemble, circle_model
from .ensemble_line import LineEnsemble, ScaledFugacity, UnitFugacity, line_model
from .exact_dist import (
    exact_cumulants,
    exact_pmf,
    kolmogorov_distance_to_normal,
    log_tail_probability,
)

SQRT_2PI = math.sqrt(2.0 * math.pi)

# zone-of-control constants for doubled Bernoulli sums
CONTROL_K = (2.0 + math.e) * 8.0
CONTROL_D = 1.0 / ((4.0 * math.e + 8.0) * 8.0)
CONTROL_D_ALT = 1.0 / (8.0 * math.e + 96.0)
CONTROL_V = 3.0
CONTROL_W = 3.0


class RateDomainError(ValueError):
    pass


class StripError(ValueError):
    """z lies outside the strip where the mod-Gaussian expansion holds."""


class ZoneConditionError(ValueError):
    """The (D, K2, w, gamma) arithmetic of the zone of control is violated."""


# ---------------------------------------------------------------------------
# line ensemble, X^2 = 2 n gamma


def t0(gamma):
    """Saddle parameter at z = 0; 1 / t0 is the limiting unit-charge fraction."""
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    return 0.5 * (1.0 + math.sqrt(1.0 + 2.0 / gamma))


def line_t_of_z(gamma, z):
    return 0.5 * (1.0 + math.sqrt(1.0 + 2.0 * math.exp(-2.0 * z) / gamma))


def _lambda_hat(t):
    return -0.5 * math.log1p(-1.0 / t) + 0.5 / t


def line_lambda(gamma, z):
    """Limit of log E[e^{z U_n}] / 2n in the t-parametrization."""
    return _lambda_hat(line_t_of_z(gamma, z)) - _lambda_hat(t0(gamma))


def _g_minus(g, s):
    return -math.log(s) - 2.0 * g * s + g * s * s


def line_lambda_laplace(gamma, z):
    """Same limit written directly from the Laplace-method saddle values."""
    return (
        z
        - gamma * math.expm1(2.0 * z)
        - _g_minus(gamma * math.exp(2.0 * z), line_t_of_z(gamma, z))
        + _g_minus(gamma, t0(gamma))
    )


def line_lambda_prime(gamma, z):
    return 1.0 / line_t_of_z(gamma, z)


def line_lambda_second(gamma, z):
    t = line_t_of_z(gamma, z)
    return 2.0 * (t - 1.0) / (t * (2.0 * t - 1.0))


def line_kappa_derived(t):
    """Third derivative of the limiting CGF, chained through dz/dt."""
    return -4.0 * (-2.0 * t * t + 4.0 * t - 1.0) * (t - 1.0) / (t * (2.0 * t - 1.0) ** 3)


def line_kappa_printed(t):
    """The alternative closed form with a 5t linear coefficient; kept for comparison."""
    return 4.0 * (-2.0 * t * t + 5.0 * t - 1.0) * (t - 1.0) / (t * (2.0 * t - 1.0) ** 3)


LINE_KAPPA_CANDIDATES = {"derived": line_kappa_derived, "printed": line_kappa_printed}


@dataclass(frozen=True)
class KappaSelection:
    chosen: str
    limits: dict
    errors: dict  # candidate -> list of |kappa3/2n - candidate| over ns
    ns: tuple


def select_line_kappa(gamma, ns=(200, 500, 1000)):
    """Pick the third-cumulant rate that the exact kappa3 / 2n converges to.

    A candidate is accepted when its error shrinks along ``ns`` and ends below
    a tenth of the other candidate's error.
    """
    tt = t0(gamma)
    limits = {k: f(tt) for k, f in LINE_KAPPA_CANDIDATES.items()}
    rates = [exact_cumulants(line_model(LineEnsemble(n, ScaledFugacity(gamma)))).kappa3 / (2 * n) for n in ns]
    errors = {k: [abs(r - v) for r in rates] for k, v in limits.items()}
    chosen = None
    for name, errs in errors.items():
        other = min(e[-1] for k, e in errors.items() if k != name)
        shrinking = all(b < a for a, b in zip(errs, errs[1:]))
        if shrinking and errs[-1] < 0.1 * other:
            chosen = name
    if chosen is None:
        raise RuntimeError(f"exact third cumulant matches neither candidate: {errors}")
    return KappaSelection(chosen, limits, errors, tuple(ns))


# ---------------------------------------------------------------------------
# line ensemble, X = 1


def line_unit_log_mgf_asymptotic(n, z):
    """Leading large-n form of log E[e^{z U_n}] at X = 1 (z may be complex)."""
    return 0.5 * (1.0 - np.exp(2.0 * z)) + 2.0 * math.sqrt(n) * np.expm1(z)


def line_unit_strip(n):
    """Half-width in Im z of the strip where the X = 1 expansion is valid."""
    return 0.25 * math.pi * n ** (1.0 / 6.0)


# ---------------------------------------------------------------------------
# circle ensemble


def circle_lambda(rho, z):
    u = rho * math.exp(z)
    return 2.0 * u * math.atan(1.0 / u) - 2.0 * rho * math.atan(1.0 / rho) + math.log((u * u + 1.0) / (rho * rho + 1.0))


def circle_lambda_prime(rho, z):
    u = rho * math.exp(z)
    return 2.0 * u * math.atan(1.0 / u)


def circle_lambda_second(rho, z):
    u = rho * math.exp(z)
    return 2.0 * u * math.atan(1.0 / u) - 2.0 * u * u / (1.0 + u * u)


def circle_lambda_third(rho, z):
    u = rho * math.exp(z)
    return 2.0 * u * math.atan(1.0 / u) - 2.0 * u * u * (3.0 + u * u) / (1.0 + u * u) ** 2


# ---------------------------------------------------------------------------
# limit profiles


@dataclass(frozen=True)
class LimitProfile:
    """Limiting rates and mod-Gaussian parameters for one model and regime.

    Cumulant rates are ``kappa_r / normalizer(n)``. ``tn_rule`` gives the
    finite-n mod-Gaussian parameter (from the exact variance where the regime
    calls for it) and ``center`` the constant subtracted before scaling by
    ``n ** scale_exponent``.
    """

    model_id: str
    mean_rate: float
    var_rate: float
    kappa_rate: float
    psi_coefficient: float
    scale_exponent: float
    normalizer: Callable[[int], float]
    speed: Callable[[int], float]
    model_factory: Callable
    tn_rule: Callable[[int], float]
    center: Callable[[int], float]

    def psi(self, z):
        return np.exp(self.psi_coefficient * z**3)

    def scale(self, n):
        return n**self.scale_exponent

    def standardized_values(self, n):
        values = 2.0 * np.arange(n + 1)
        return (values - self.center(n)) / self.scale(n)


def _exact_kappa(factory):
    return lambda n: exact_cumulants(factory(n))


def line_limit_profile(gamma, printed_form=False):
    tt = t0(gamma)
    kappa = (line_kappa_printed if printed_form else line_kappa_derived)(tt)

    def factory(n):
        return line_model(LineEnsemble(n, ScaledFugacity(gamma)))

    cum = _exact_kappa(factory)
    return LimitProfile(
        model_id=f"line-scaled(gamma={gamma!r})",
        mean_rate=1.0 / tt,
        var_rate=2.0 * (tt - 1.0) / (tt * (2.0 * tt - 1.0)),
        kappa_rate=kappa,
        # kappa is per 2n, so kappa3 / n -> 2 kappa and psi = exp(2 kappa z^3 / 6)
        psi_coefficient=kappa / 3.0,
        scale_exponent=1.0 / 3.0,
        normalizer=lambda n: 2.0 * n,
        speed=lambda n: 2.0 * n,
        model_factory=factory,
        tn_rule=lambda n: cum(n).kappa2 / n * n ** (1.0 / 3.0),
        center=lambda n: cum(n).kappa1,
    )


def line_unit_profile():
    def factory(n):
        return line_model(LineEnsemble(n, UnitFugacity()))

    return LimitProfile(
        model_id="line-unit",
        mean_rate=1.0,
        var_rate=1.0,
        kappa_rate=1.0,
        psi_coefficient=1.0 / 3.0,
        scale_exponent=1.0 / 6.0,
        normalizer=lambda n: 2.0 * math.sqrt(n),
        speed=lambda n: 2.0 * math.sqrt(n),
        model_factory=factory,
        tn_rule=lambda n: 2.0 * n ** (1.0 / 6.0),
        center=lambda n: 2.0 * math.sqrt(n),
    )


def circle_limit_profile(rho):
    if not rho > 0:
        raise ValueError("rho must be positive")
    m = 2.0 * rho * math.atan(1.0 / rho)

    def factory(n):
        return circle_model(CircleEnsemble(n, rho))

    cum = _exact_kappa(factory)
    kappa = circle_lambda_third(rho, 0.0)
    return LimitProfile(
        model_id=f"circle(rho={rho!r})",
        mean_rate=m,
        var_rate=m - 2.0 * rho * rho / (1.0 + rho * rho),
        kappa_rate=kappa,
        psi_coefficient=kappa / 6.0,
        scale_exponent=1.0 / 3.0,
        normalizer=float,
        speed=float,
        model_factory=factory,
        tn_rule=lambda n: cum(n).kappa2 / n * n ** (1.0 / 3.0),
        center=lambda n: cum(n).kappa1,
    )


# ---------------------------------------------------------------------------
# rate functions


@dataclass(frozen=True)
class RateFunction:
    name: str
    domain: tuple
    evaluate: Callable[[float], float]
    minimizer: float
    speed: Callable[[int], float]
    speed_rule: str

    def __call__(self, x):
        return self.evaluate(x)


def _line_rate_a(gamma):
    return -0.5 * (1.0 + math.log(2.0 * gamma))


def _line_rate_shape(gamma, x):
    return xlogy(x, x) + 0.5 * xlogy(1.0 - x, 1.0 - x) + _line_rate_a(gamma) * x


def line_rate_minimizer(gamma):
    return math.sqrt(gamma * gamma + 2.0 * gamma) - gamma


def _line_rate_b(gamma):
    # anchors the rate at zero on its minimizer
    return -_line_rate_shape(gamma, line_rate_minimizer(gamma))


def line_rate_scaled(gamma, x):
    """Rate function of U_n / 2n at speed 2n, X^2 = 2 n gamma."""
    if not 0.0 < x < 1.0:
        raise RateDomainError(f"x={x!r} outside (0, 1)")
    return float(_line_rate_shape(gamma, x) + _line_rate_b(gamma))


def line_rate_unit(x):
    """Poisson-type rate x log x - x + 1 of U_n / 2 sqrt(n) at speed 2 sqrt(n).

    The limiting CGF e^z - 1 is taken per 2 sqrt(n), so that is the speed.
    """
    if x < 0:
        raise RateDomainError(f"x={x!r} must be non-negative")
    return float(xlogy(x, x) - x + 1.0)


def legendre_transform(lam_prime, lam, x, x_range=None, lam_second=None, tol=1e-12, max_iter=200):
    """sup_z (x z - lam(z)) for a convex lam with increasing derivative ``lam_prime``.

    Solves lam_prime(z) = x by Newton steps guarded by a bisection bracket.
    """
    if x_range is not None:
        lo_x, hi_x = x_range
        if not lo_x < x < hi_x:
            raise RateDomainError(f"x={x!r} outside the open range ({lo_x}, {hi_x}) of the derivative")

    def f(z):
        return lam_prime(z) - x

    lo, hi = -1.0, 1.0
    while f(lo) > 0:
        lo *= 2.0
        if lo < -1e4:
            raise RateDomainError(f"x={x!r} below the range of the derivative")
    while f(hi) < 0:
        hi *= 2.0
        if hi > 1e4:
            raise RateDomainError(f"x={x!r} above the range of the derivative")

    z = 0.0 if lo < 0.0 < hi else 0.5 * (lo + hi)
    for _ in range(max_iter):
        fz = f(z)
        if fz == 0.0:
            break
        if fz < 0:
            lo = z
        else:
            hi = z
        if lam_second is not None:
            d = lam_second(z)
        else:
            h = 1e-6 * max(1.0, abs(z))
            d = (lam_prime(z + h) - lam_prime(z - h)) / (2.0 * h)
        step = fz / d if d > 0 else math.inf
        znew = z - step
        if not lo < znew < hi:
            znew = 0.5 * (lo + hi)
        if abs(znew - z) <= tol * max(1.0, abs(z)) or hi - lo <= tol:
            z = znew
            break
        z = znew
    return max(0.0, x * z - lam(z))


def line_scaled_rate(gamma):
    return RateFunction(
        name=f"line-scaled(gamma={gamma!r})",
        domain=(0.0, 1.0),
        evaluate=lambda x: line_rate_scaled(gamma, x),
        minimizer=line_rate_minimizer(gamma),
        speed=lambda n: 2.0 * n,
        speed_rule="2n",
    )


def line_scaled_rate_numeric(gamma, x):
    """Numerical Legendre dual of the limiting line CGF; cross-checks the closed form."""
    return legendre_transform(
        lambda z: line_lambda_prime(gamma, z),
        lambda z: line_lambda(gamma, z),
        x,
        x_range=(0.0, 1.0),
        lam_second=lambda z: line_lambda_second(gamma, z),
    )


def line_unit_rate():
    return RateFunction(
        name="line-unit",
        domain=(0.0, math.inf),
        evaluate=line_rate_unit,
        minimizer=1.0,
        speed=lambda n: 2.0 * math.sqrt(n),
        speed_rule="2sqrt(n)",
    )


def circle_rate_value(rho, x):
    return legendre_transform(
        lambda z: circle_lambda_prime(rho, z),
        lambda z: circle_lambda(rho, z),
        x,
        x_range=(0.0, 2.0),
        lam_second=lambda z: circle_lambda_second(rho, z),
    )


def circle_rate(rho):
    return RateFunction(
        name=f"circle(rho={rho!r})",
        domain=(0.0, 2.0),
        evaluate=lambda x: circle_rate_value(rho, x),
        minimizer=circle_lambda_prime(rho, 0.0),
        speed=float,
        speed_rule="n",
    )


@dataclass(frozen=True)
class BoundaryReport:
    computed: float  # numerically obtained limit of the rate as x -> 0+
    closed_form: float  # 2 rho atan(1/rho) + log(1 + rho^2)
    printed: float  # the same expression with both signs flipped
    sign_discrepancy: bool


def circle_rate_boundary(rho, z_far=-40.0):
    """Limit of the circle rate function at x = 0, i.e. -inf_z Lambda(z)."""
    computed = -circle_lambda(rho, z_far)
    closed = 2.0 * rho * math.atan(1.0 / rho) + math.log1p(rho * rho)
    printed = -closed
    return BoundaryReport(computed, closed, printed, abs(computed - printed) > 1e-8 * max(1.0, abs(computed)))


def rate_convexity_ok(rate, xs):
    """Midpoint convexity on consecutive triples of an evenly spaced grid."""
    vals = np.array([rate(x) for x in xs])
    second = vals[:-2] - 2.0 * vals[1:-1] + vals[2:]
    return bool((second >= -1e-10 * np.maximum(1.0, np.abs(vals[1:-1]))).all())


# ---------------------------------------------------------------------------
# mod-Gaussian residuals and consequences


def mod_gaussian_residual(logmgf, center, tn, n, z, scale_exponent=1.0 / 3.0, strip=None):
    """psi_n(z) = E[exp(z X_n)] exp(-t_n z^2 / 2) with X_n = (count - center) / n^e.

    ``logmgf`` is the log-MGF of the raw count and must accept complex
    arguments when z is complex; ``tn`` may be a number or a rule n -> t_n.
    """
    z = complex(z) if np.iscomplexobj(z) else z
    if strip is not None and abs(np.imag(z)) >= strip:
        raise StripError(f"|Im z|={abs(np.imag(z))} outside the strip of half-width {strip}")
    t = tn(n) if callable(tn) else tn
    w = z / n**scale_exponent
    return np.exp(logmgf(w) - center * w - t * z * z / 2.0)


def psi_n(profile, n, z, asymptotic=False):
    """Finite-n mod-Gaussian residual of ``profile`` at z.

    ``asymptotic=True`` is only meaningful for the X = 1 line regime, where it
    swaps the exact log-MGF for its closed-form large-n expansion.
    """
    unit = profile.model_id == "line-unit"
    strip = line_unit_strip(n) if unit else None
    if asymptotic:
        if not unit:
            raise ValueError("asymptotic log-MGF exists only for the X = 1 line regime")

        def logmgf(w):
            return line_unit_log_mgf_asymptotic(n, w)
    else:
        logmgf = profile.model_factory(n).log_mgf
    return mod_gaussian_residual(
        logmgf, profile.center(n), profile.tn_rule(n), n, z, profile.scale_exponent, strip=strip
    )


def residual_error(profile, n, zs=(-1.0, -0.5, 0.5, 1.0), asymptotic=False):
    """max_z |psi_n(z) - psi(z)| over real z."""
    return max(abs(psi_n(profile, n, z, asymptotic=asymptotic) - profile.psi(z)) for z in zs)


def fit_psi_coefficient(profile, n, zs=(0.5, 1.0)):
    """Estimate c in psi(z) = exp(c z^3) from the odd part of log psi_n on real z."""
    fits = []
    for z in zs:
        odd = np.log(psi_n(profile, n, z)) - np.log(psi_n(profile, n, -z))
        fits.append(float(np.real(odd)) / (2.0 * z**3))
    return float(np.mean(fits))


def select_line_psi_divisor(gamma, n=1000):
    """Return 3 or 6: which exp(kappa z^3 / d) the line residual approaches."""
    prof = line_limit_profile(gamma)
    c = fit_psi_coefficient(prof, n)
    kappa = prof.kappa_rate
    return min((3, 6), key=lambda d: abs(c - kappa / d))


def precise_deviation_prediction(tn, x, psi):
    """Leading term e^{-t x^2/2} psi(x) / (|x| sqrt(2 pi t)) of P[X_n >= t x] (x > 0) or P[X_n <= t x] (x < 0).

    ``psi`` is a callable or the coefficient c of psi(z) = exp(c z^3).
    """
    if x == 0:
        raise ValueError("x must be non-zero")
    pv = psi(x) if callable(psi) else math.exp(psi * x**3)
    return math.exp(-tn * x * x / 2.0) / (abs(x) * math.sqrt(2.0 * math.pi * tn)) * float(np.real(pv))


def precise_deviation_ratio(profile, n, x, pmf=None):
    """Exact tail of X_n beyond t_n x divided by the leading-term prediction."""
    pmf = exact_pmf(profile.model_factory(n)) if pmf is None else pmf
    tn = profile.tn_rule(n)
    xs = profile.standardized_values(n)
    mask = xs >= tn * x if x > 0 else xs <= tn * x
    exact = float(pmf.mass[mask].sum())
    return exact / precise_deviation_prediction(tn, x, profile.psi)


def berry_esseen_constant(D, v, K1, tol=1e-10):
    """min over lambda > 0 of the Berry-Esseen constant C(D, v, K1).

    Golden-section search on log(lambda) in [-20, 20].
    """
    if not (D > 0 and K1 > 0 and v >= 1):
        raise ValueError("need D > 0, K1 > 0, v >= 1")
    head = 2.0 ** (v - 0.5) * math.gamma(v / 2.0) * K1
    tail = math.pi ** (1.0 / 6.0) / D

    def c(s):
        lam = math.exp(s)
        return (1.0 + lam) / (math.sqrt(2.0) * math.pi) * (head + tail * (4.0 * (1.0 + 1.0 / lam) ** (1.0 / 3.0) + 3.0 * 3.0 ** (1.0 / 3.0)))

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = -20.0, 20.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = c(x1), c(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = c(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = c(x2)
    return min(f1, f2)


@dataclass(frozen=True)
class BerryEsseenReport:
    n: int
    d_kol: float
    tn: float
    constant: float
    bound: float

    @property
    def holds(self):
        return self.d_kol <= self.bound


def berry_esseen_check(profile, n, D=CONTROL_D, v=CONTROL_V, K1=CONTROL_K, gamma_exp=1.0, pmf=None):
    pmf = exact_pmf(profile.model_factory(n)) if pmf is None else pmf
    cum = exact_cumulants(profile.model_factory(n))
    d = kolmogorov_distance_to_normal(pmf, cum.kappa1, cum.kappa2)
    tn = profile.tn_rule(n)
    const = berry_esseen_constant(D, v, K1)
    return BerryEsseenReport(n, d, tn, const, const / tn ** (gamma_exp + 0.5))


def zone_arithmetic_violations(D, K2, w, gamma_exp):
    """List the violated conditions among w >= 2, -1/2 <= gamma <= 1/(w-2), D <= (1/4K2)^{1/(w-2)}."""
    bad = []
    if w < 2:
        bad.append("w >= 2")
    if gamma_exp < -0.5:
        bad.append("gamma >= -1/2")
    if w > 2 and gamma_exp > 1.0 / (w - 2.0):
        bad.append("gamma <= 1/(w-2)")
    if w > 2 and D > (1.0 / (4.0 * K2)) ** (1.0 / (w - 2.0)) * (1.0 + 1e-12):
        bad.append("D <= (1/(4 K2))^(1/(w-2))")
    return bad


@dataclass(frozen=True)
class ZoneReport:
    passed: bool
    violations: int
    max_ratio: float  # max of |psi_n(i xi) - 1| / bound over xi != 0
    worst_xi: float
    halfwidth: float
    tn: float


def zone_of_control_check(model, n, D, K1, K2, v, w, gamma_exp, grid=2001, center=None, tn=None, scale_exponent=1.0 / 3.0):
    """Check |psi_n(i xi) - 1| <= K1 |xi|^v exp(K2 |xi|^w) on [-D t_n^g, D t_n^g].

    Raises :class:`ZoneConditionError` when the parameter arithmetic fails;
    an empirical failure of the bound is reported in the result instead.
    """
    bad = zone_arithmetic_violations(D, K2, w, gamma_exp)
    if bad:
        raise ZoneConditionError("zone-of-control arithmetic violated: " + ", ".join(bad))
    cum = exact_cumulants(model)
    center = cum.kappa1 if center is None else center
    tn = cum.kappa2 / n * n ** (1.0 / 3.0) if tn is None else tn
    half = D * tn**gamma_exp
    # built from integers so the middle point is exactly 0
    m = (grid - 1) // 2
    xi = half * np.arange(-m, m + 1) / m
    w_arg = 1j * xi / n**scale_exponent
    logpsi = model.log_mgf(w_arg) - center * w_arg + tn * xi * xi / 2.0
    lhs = np.abs(np.expm1(logpsi))
    ax = np.abs(xi)
    rhs = K1 * ax**v * np.exp(K2 * ax**w)
    ok = lhs <= rhs
    nz = ax > 0
    ratio = lhs[nz] / rhs[nz]
    k = int(np.argmax(ratio))
    return ZoneReport(bool(ok.all()), int((~ok).sum()), float(ratio[k]), float(xi[nz][k]), float(half), float(tn))


def local_limit_prediction(tn, a, b, delta):
    if not a < b:
        raise ValueError("need a < b")
    if not delta > 0:
        raise ValueError("delta must be positive")
    return (b - a) / SQRT_2PI


@dataclass(frozen=True)
class LocalLimitReport:
    scaled_probability: float  # t_n^delta * P[X_n / sqrt(t_n) - x in t_n^-delta (a, b)]
    prediction: float
    ratio: float  # fitted constant relative to (b - a) / sqrt(2 pi)
    atoms: int  # lattice atoms inside the event
    lattice_factor: float  # 1: span-2 atoms each carry ~2x the local density, averaged over the window


def local_limit_check(profile, n, a, b, x=0.0, delta=0.5, pmf=None):
    """Compare the exact lattice probability of a shrinking window with its limit.

    Atoms sit on a lattice of span 2 in count units; a window covering many
    atoms collects about (width / 2) atoms of mass 2 * density each, so the
    density factor is 1 once the window spans tens of atoms.
    """
    pmf = exact_pmf(profile.model_factory(n)) if pmf is None else pmf
    tn = profile.tn_rule(n)
    xs = profile.standardized_values(n)
    u = (xs / math.sqrt(tn) - x) * tn**delta
    inside = (u > a) & (u < b)
    scaled = tn**delta * float(pmf.mass[inside].sum())
    pred = local_limit_prediction(tn, a, b, delta)
    return LocalLimitReport(scaled, pred, scaled / pred, int(inside.sum()), 1.0)


@dataclass(frozen=True)
class LdpCheck:
    x: float
    side: str
    empirical: float  # -log P / speed
    rate: float
    error: float
    x_lattice: float  # first atom of the tail set, divided by the normalizer


def ldp_tail_check(rate, model, n, x, normalizer):
    """-(1/s_n) log P[count / normalizer beyond x] against the rate.

    The tail is taken on the side of x away from the minimizer. The count
    lives on the even integers, so the event is really "beyond the first even
    atom past x * normalizer"; the rate is evaluated there, where its infimum
    over the tail set is attained.
    """
    side = ">=" if x > rate.minimizer else "<="
    thr = x * normalizer
    atom = 2.0 * (math.ceil(thr / 2.0 - 1e-12) if side == ">=" else math.floor(thr / 2.0 + 1e-12))
    logp = log_tail_probability(model, thr, side)
    emp = -logp / rate.speed(n)
    xl = atom / normalizer
    lo, hi = rate.domain
    r = rate(xl) if lo < xl < hi else rate(x)
    return LdpCheck(x, side, emp, r, abs(emp - r), xl)
