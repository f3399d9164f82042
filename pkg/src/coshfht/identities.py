"""Closed-form identities of the cosh-weighted FHT, checked by quadrature.

Each :class:`IdentityCase` pairs a quadrature-evaluated left-hand side
with a closed-form right-hand side over a parameter grid.  The catalog
covers the five cosh-kernel moment/PV identities, the quadratic-weight
family identity, and the exponential Chebyshev transform identities for
one-sided (exp) and two-sided (cosh) kernels.

Conventions fixed against the PV quadrature oracle:

* the exponential factor in the exponential Chebyshev results is
  ``exp(-mu t)`` where t is the pole location (``EXPONENT_SIGN = -1``);
* in the quadratic-weight identity the leading term carries
  ``sinh[mu (t - u)]`` and the linear coefficient contributes
  ``-beta cosh(mu u)``.  Both follow from combining the lower-order
  identities algebraically, and the oracle confirms them to round-off.

Identifiers: ``I2_1`` ... ``I2_5``, ``null``, ``I2_42``, ``I3_8``,
``I3_10``, ``I3_15``, ``I3_18``, ``I3_19``, ``I3_20``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Callable

import numpy as np

import mpmath

from .cheb_basis import as_mu
from .quadrature import LD, MP, MP_DPS, integrate

__all__ = [
    "EXPONENT_SIGN",
    "LEMMA_IDS",
    "CHEB_IDS",
    "NULL_ID",
    "FAMILY_WEIGHTS",
    "IdentityCase",
    "IdentityReport",
    "identity_grid",
    "make_case",
    "identity_catalog",
    "check_identity",
    "run_catalog",
]

EXPONENT_SIGN = -1
LEMMA_IDS = ("I2_1", "I2_2", "I2_3", "I2_4", "I2_5")
NULL_ID = "null"
CHEB_IDS = ("I3_8", "I3_10", "I3_15", "I3_18", "I3_19", "I3_20")
FAMILY_WEIGHTS = ((0, 1, 1), (0, -1, 1), (1, 0, 2))

LEMMA_TOL = 1e-8
CHEB_TOL = 1e-6


@dataclass(frozen=True)
class IdentityCase:
    """One catalog identity at a fixed mu over a parameter grid.

    ``integrand(p, xp)`` returns the angular integrand for parameter point
    ``p`` written against the arithmetic backend ``xp`` (long double or
    mpmath); for ``kind == "pv"`` the pole sits at ``p["t"]`` and the LHS is
    (1/pi) PV int g(s)/(t - s) ds, for ``kind == "angular"`` the LHS is
    (1/pi) int_0^pi g(theta) dtheta.  ``rhs(p, xp)`` is the closed form.
    """

    id: str
    mu: complex
    kind: str
    integrand: Callable
    rhs: Callable
    params: list = field(default_factory=list)
    tol: float = LEMMA_TOL
    label: str = ""


@dataclass
class IdentityReport:
    id: str
    mu: complex
    label: str
    max_residual: float
    worst: dict
    tol: float
    points: int
    peak: float
    backends: tuple = ()

    @property
    def passed(self) -> bool:
        return bool(self.max_residual < self.tol)

    def as_row(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "mu_re": self.mu.real,
            "mu_im": self.mu.imag,
            "max_residual": self.max_residual,
            "tol": self.tol,
            "passed": self.passed,
            "points": self.points,
            "worst": ";".join(f"{k}={v!r}" for k, v in self.worst.items()),
        }


def identity_grid(k: int = 7, clip: float = 0.95) -> np.ndarray:
    """k Chebyshev-interior points clipped to [-clip, clip]."""
    m = np.arange(k)
    return np.clip(np.cos((m + 0.5) * np.pi / k), -clip, clip)


# --- closed-form helpers ----------------------------------------------------


def _cheb_U(n, t):
    """U_n(t) by recurrence, for any numeric type; U_{-1} = 0."""
    if n < 0:
        return 0 * t
    prev, cur = 1 + 0 * t, 2 * t
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2 * t * cur - prev
    return cur


def _tail(mu, n, t):
    """sum_{k=0}^{n-1} mu^k/k! U_{n-1-k}(t)."""
    return sum(mu**k / factorial(k) * _cheb_U(n - 1 - k, t) for k in range(n))


def _bracket(mu, n, t):
    """sum_{k=0}^{n} mu^k/k! U_{n-k}(t) - sum_{k=0}^{n-2} mu^k/k! U_{n-2-k}(t)."""
    upper = sum(mu**k / factorial(k) * _cheb_U(n - k, t) for k in range(n + 1))
    lower = sum(mu**k / factorial(k) * _cheb_U(n - 2 - k, t) for k in range(n - 1))
    return upper - lower


def cheb_first_kind_transform(mu, n, t, xp=LD):
    """H_mu[T_{mu,n}(s)/sqrt(1-s^2)](t) = -exp(-mu t) sum_k mu^k/k! U_{n-1-k}(t), n >= 1."""
    return -xp.exp(EXPONENT_SIGN * mu * t) * _tail(mu, n, t)


def cheb_second_kind_transform(mu, n, t, xp=LD):
    """H_mu[U_{mu,n-1}(s) sqrt(1-s^2)](t), n >= 1."""
    return xp.exp(EXPONENT_SIGN * mu * t) / 2 * _bracket(mu, n, t)


def _sin_of(t, xp):
    return xp.sqrt((1 - t) * (1 + t))


def _lemma_kernel(mu, t, u, xp):
    # i sinh[mu(t-u)] sinh(i mu sqrt(1-t^2)) / sqrt(1-t^2)
    st = _sin_of(t, xp)
    return -xp.sinh(mu * (t - u)) * xp.sin(mu * st) / st


def _mu_in(xp, mu):
    return mpmath.mpc(mu) if xp is MP else mu


def _point(xp, p, key):
    return xp.num(p[key])


# --- case construction -------------------------------------------------------


def make_case(case_id: str, mu, *, n_values=range(1, 7), grid=None, weights=(0, 1, 1)) -> IdentityCase:
    """Build a single catalog identity at parameter ``mu``.

    ``weights`` selects (alpha, beta, gamma) for ``I2_42``; ``n_values``
    applies to the exponential Chebyshev identities.
    """
    mu0 = as_mu(mu)
    grid = identity_grid() if grid is None else np.asarray(grid, dtype=float)
    tu = [{"t": float(t), "u": float(u)} for t in grid for u in grid]
    u_only = [{"u": float(u)} for u in grid]
    t_only = [{"t": float(t)} for t in grid]

    def lemma(weight):
        # integrand cosh[mu(u - s)] * weight(theta) for the lemma family
        def build(p, xp):
            mu, u = _mu_in(xp, mu0), _point(xp, p, "u")
            return lambda th: xp.cosh(mu * (u - xp.cos(th))) * weight(th, mu, xp)
        return build

    def rhs1(p, xp):
        return xp.cosh(_mu_in(xp, mu0) * _point(xp, p, "u"))

    def rhs2(p, xp):
        mu = _mu_in(xp, mu0)
        return -mu / 2 * xp.sinh(mu * _point(xp, p, "u"))

    def rhs3(p, xp):
        mu, t, u = _mu_in(xp, mu0), _point(xp, p, "t"), _point(xp, p, "u")
        return 1j * (xp.sinh(mu * (t - u)) * xp.cos(mu * _sin_of(t, xp)) + xp.sinh(mu * u))

    def rhs4(p, xp):
        return _lemma_kernel(_mu_in(xp, mu0), _point(xp, p, "t"), _point(xp, p, "u"), xp)

    def rhs5(p, xp):
        mu, t, u = _mu_in(xp, mu0), _point(xp, p, "t"), _point(xp, p, "u")
        st = _sin_of(t, xp)
        return _lemma_kernel(mu, t, u, xp) * st * st + t * xp.cosh(mu * u) - mu / 2 * xp.sinh(mu * u)

    lemmas = {
        "I2_1": ("angular", lambda th, mu, xp: xp.cos(mu * xp.sin(th)), rhs1, u_only,
                 "cosh moment, weight 1/sqrt(1-s^2)"),
        "I2_2": ("angular", lambda th, mu, xp: xp.cos(mu * xp.sin(th)) * xp.cos(th), rhs2, u_only,
                 "first moment, weight s/sqrt(1-s^2)"),
        "I2_3": ("pv", lambda th, mu, xp: 1j * xp.sin(mu * xp.sin(th)), rhs3, tu,
                 "PV with sinh(i mu sqrt(1-s^2))"),
        "I2_4": ("pv", lambda th, mu, xp: xp.cos(mu * xp.sin(th)) / xp.sin(th), rhs4, tu,
                 "PV with cosh(i mu sqrt(1-s^2))/sqrt(1-s^2)"),
        "I2_5": ("pv", lambda th, mu, xp: xp.cos(mu * xp.sin(th)) * xp.sin(th), rhs5, tu,
                 "PV with cosh(i mu sqrt(1-s^2)) sqrt(1-s^2)"),
    }
    if case_id == "null":
        def null_integrand(p, xp):
            mu, t = _mu_in(xp, mu0), _point(xp, p, "t")
            return lambda th: xp.cosh(mu * (t - xp.cos(th))) * xp.cos(mu * xp.sin(th)) / xp.sin(th)

        return IdentityCase(case_id, mu0, "pv", null_integrand, lambda p, xp: 0, t_only, LEMMA_TOL,
                            "null function cos(mu sqrt(1-s^2))/sqrt(1-s^2) is annihilated")
    if case_id in lemmas:
        kind, weight, rhs, params, label = lemmas[case_id]
        return IdentityCase(case_id, mu0, kind, lemma(weight), rhs, params, LEMMA_TOL, label)

    if case_id == "I2_42":
        a, b, c = (complex(w) for w in weights)

        def q(s):
            return a * s * s + b * s + c

        def rhs42(p, xp):
            mu, t, u = _mu_in(xp, mu0), _point(xp, p, "t"), _point(xp, p, "u")
            return (q(t) * _lemma_kernel(mu, t, u, xp) - a * t * xp.cosh(mu * u)
                    + a * mu / 2 * xp.sinh(mu * u) - b * xp.cosh(mu * u))

        weight = lambda th, mu, xp: q(xp.cos(th)) * xp.cos(mu * xp.sin(th)) / xp.sin(th)  # noqa: E731
        return IdentityCase(case_id, mu0, "pv", lemma(weight), rhs42, tu, LEMMA_TOL,
                            f"quadratic weight (alpha,beta,gamma)={tuple(weights)}")

    cheb = _cheb_case(case_id, mu0)
    if cheb is None:
        raise KeyError(f"unknown identity {case_id!r}")
    integrand, rhs, label = cheb
    params = [dict(p, n=int(n)) for n in n_values for p in t_only]
    if any(p["n"] < 1 for p in params):
        raise ValueError("exponential Chebyshev identities need n >= 1")
    return IdentityCase(case_id, mu0, "pv", integrand, rhs, params, CHEB_TOL, label)


def _cheb_case(case_id, mu0):
    def first(th, n, mu, xp):  # T_{mu,n}(s)/sqrt(1-s^2)
        return xp.cos(n * th - mu * xp.sin(th)) / xp.sin(th)

    def second(th, n, mu, xp):  # U_{mu,n-1}(s) sqrt(1-s^2)
        return xp.sin(n * th - mu * xp.sin(th))

    def at_pole(p, xp):
        th = xp.arccos(_point(xp, p, "t"))
        return _mu_in(xp, mu0), p["n"], th, xp.cos(th)

    def u_mu(p, xp):  # U_{mu,n-1}(t)
        mu, n, th, _ = at_pole(p, xp)
        return xp.sin(n * th - mu * xp.sin(th)) / xp.sin(th)

    def t_mu(p, xp):
        mu, n, th, _ = at_pole(p, xp)
        return xp.cos(n * th - mu * xp.sin(th))

    def kernel_of(kind, basis):
        def build(p, xp):
            mu, n, t = _mu_in(xp, mu0), p["n"], _point(xp, p, "t")
            if kind == "cosh":
                return lambda th: xp.cosh(mu * (t - xp.cos(th))) * basis(th, n, mu, xp)
            return lambda th: xp.exp(kind * mu * (t - xp.cos(th))) * basis(th, n, mu, xp)
        return build

    def rhs15(p, xp):
        mu, n, _, t = at_pole(p, xp)
        return u_mu(p, xp) - 2 * xp.exp(EXPONENT_SIGN * mu * t) * _tail(mu, n, t)

    def rhs18(p, xp):
        mu, n, _, t = at_pole(p, xp)
        return -t_mu(p, xp) + xp.exp(EXPONENT_SIGN * mu * t) * _bracket(mu, n, t)

    def rhs19(p, xp):
        mu, n, _, t = at_pole(p, xp)
        return cheb_first_kind_transform(mu, n, t, xp)

    def rhs20(p, xp):
        mu, n, _, t = at_pole(p, xp)
        return cheb_second_kind_transform(mu, n, t, xp)

    table = {
        "I3_8": (kernel_of(+1, first), lambda p, xp: -u_mu(p, xp),
                 "exp(+) kernel, T_{mu,n}/sqrt(1-s^2)"),
        "I3_10": (kernel_of(+1, second), t_mu, "exp(+) kernel, U_{mu,n-1} sqrt(1-s^2)"),
        "I3_15": (kernel_of(-1, first), rhs15, "exp(-) kernel, T_{mu,n}/sqrt(1-s^2)"),
        "I3_18": (kernel_of(-1, second), rhs18, "exp(-) kernel, U_{mu,n-1} sqrt(1-s^2)"),
        "I3_19": (kernel_of("cosh", first), rhs19, "cosh kernel, T_{mu,n}/sqrt(1-s^2)"),
        "I3_20": (kernel_of("cosh", second), rhs20, "cosh kernel, U_{mu,n-1} sqrt(1-s^2)"),
    }
    return table.get(case_id)


def identity_catalog(mu, *, ids=None, n_values=range(1, 7), grid=None) -> list[IdentityCase]:
    """All catalog identities at ``mu``; ``I2_42`` expands to one case per weight."""
    ids = LEMMA_IDS + (NULL_ID, "I2_42") + CHEB_IDS if ids is None else tuple(ids)
    cases = []
    for case_id in ids:
        if case_id == "I2_42":
            cases.extend(make_case(case_id, mu, grid=grid, weights=w) for w in FAMILY_WEIGHTS)
        else:
            cases.append(make_case(case_id, mu, n_values=n_values, grid=grid))
    return cases


def check_identity(case: IdentityCase, tol=None, precision="auto") -> IdentityReport:
    """Evaluate both sides of ``case`` on its grid and report the worst residual.

    Residuals are absolute, |LHS - RHS|.  With ``precision="auto"`` each
    point is evaluated in long double and re-evaluated with mpmath when
    the long-double rounding floor of the integrand peak is not safely
    below ``tol``; ``"extended"`` and ``"mp"`` force one backend.
    Exceeding ``tol`` (default: the case tolerance) is flagged in the
    report, not raised; quadrature failures raise ConvergenceError.
    """
    tol = case.tol if tol is None else tol
    worst, worst_p, peak, used = -1.0, {}, 0.0, set()
    for p in case.params:
        def g(th, xp, p=p):
            return case.integrand(p, xp)(th)

        fn = (lambda th: g(th, LD)) if precision == "extended" else g
        t = p["t"] if case.kind == "pv" else None
        lhs, pk, xp = integrate(fn, t, tol=tol / 100, precision=precision)
        with mpmath.workdps(MP_DPS):
            res = float(abs(lhs - case.rhs(p, xp)))
        used.add(xp.name)
        peak = max(peak, float(pk))
        if not res <= worst:
            worst, worst_p = res, dict(p)
    return IdentityReport(case.id, case.mu, case.label, worst, worst_p, tol, len(case.params),
                          peak, tuple(sorted(used)))


def run_catalog(mu, *, ids=None, n_values=range(1, 7), tol=None, grid=None,
                precision="auto") -> list[IdentityReport]:
    """Check every identity in the catalog at ``mu``."""
    cases = identity_catalog(mu, ids=ids, n_values=n_values, grid=grid)
    return [check_identity(c, tol, precision) for c in cases]
