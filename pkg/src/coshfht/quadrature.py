"""Principal-value quadrature for the finite Hilbert transforms.

Integrands are written in the angular variable: a callable ``g(theta)``
returns the value of the integrand at ``s = cos(theta)``.  Writing
``sqrt(1 - s^2)`` as ``sin(theta)`` keeps every endpoint factor of the
form ``(1 - s^2)^(+-1/2)`` exact, and the substitution absorbs the
``1/sqrt(1 - s^2)`` weight into a smooth integrand.

The principal value is taken by singularity subtraction,

    (1/pi) PV int g(s)/(t - s) ds
        = (1/pi) int [g(s) - g(t)]/(t - s) ds + (g(t)/pi) ln((1 + t)/(1 - t)),

with the regular part integrated by Gauss-Legendre rules on [0, phi] and
[phi, pi], phi = arccos(t).  Everything runs in ``numpy.longdouble``: the
cosh kernel reaches ~1e10 for |mu| ~ 4 pi while the transforms stay O(1),
and the extra digits are what keep the cancellation below 1e-8.

Callables must be vectorized numpy expressions.  Constants such as
``numpy.pi`` inside an integrand are double precision; use ``PI`` from this
module when that matters.

When the integrand peak is so large that even long double cannot resolve
an absolute tolerance (|mu| ~ 4 pi pushes cosh to ~1e10), the private
drivers accept the ``MP`` backend, which runs the same rule on object
arrays of mpmath numbers at ``MP_DPS`` digits.  Integrands written against
the backend namespace (``xp.cos`` etc.) work with either backend.
"""

from __future__ import annotations

from functools import lru_cache
from types import SimpleNamespace

import mpmath
import numpy as np
from scipy.special import roots_legendre

from .cheb_basis import as_mu
from .errors import ConvergenceError, DomainError

__all__ = [
    "PI",
    "DEFAULT_ORDER",
    "MAX_ORDER",
    "gauss_legendre",
    "pv_integral",
    "angular_integral",
    "forward_cosh_fht",
    "integrate",
    "LD",
    "MP",
    "MP_DPS",
]

EXT = np.longdouble
PI = EXT("3.14159265358979323846264338327950288")
DEFAULT_ORDER = 2048
MAX_ORDER = 2**16
MP_DPS = 34
# convergence is judged against rounding noise of this many ulps of the integrand peak
_NOISE_ULPS = 256


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    """Gauss-Legendre nodes and weights on [-1, 1] in extended precision.

    Double-precision roots from scipy are polished by Newton steps on the
    Legendre recurrence carried out in ``longdouble``.
    """
    if n < 1:
        raise ValueError("quadrature order must be positive")
    x0, _ = roots_legendre(n)
    x = x0.astype(EXT)
    for _ in range(3):
        p, dp = _legendre_with_derivative(n, x)
        x = x - p / dp
    _, dp = _legendre_with_derivative(n, x)
    w = 2 / ((1 - x * x) * dp * dp)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _legendre_with_derivative(n, x):
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1)
    return p1, dp


def _mp_ufunc(fn):
    return np.frompyfunc(lambda x: fn(x), 1, 1)


@lru_cache(maxsize=None)
def _mp_gauss_legendre(n: int, dps: int):
    with mpmath.workdps(dps):
        x = np.array([mpmath.mpf(str(v)) for v in gauss_legendre(n)[0]], dtype=object)
        for _ in range(2):
            p, dp = _legendre_with_derivative(n, x)
            x = x - p / dp
        _, dp = _legendre_with_derivative(n, x)
        w = 2 / ((1 - x * x) * dp * dp)
    return x, w


LD = SimpleNamespace(
    name="longdouble", dtype=EXT, num=EXT, pi=PI, eps=float(np.finfo(EXT).eps),
    cos=np.cos, sin=np.sin, cosh=np.cosh, sinh=np.sinh, exp=np.exp,
    sqrt=np.sqrt, log=np.log, tan=np.tan, arccos=np.arccos,
    rule=gauss_legendre, start=DEFAULT_ORDER, cap=MAX_ORDER,
)

MP = SimpleNamespace(
    name="mpmath", dtype=object, num=mpmath.mpf, pi=None, eps=10.0 ** (1 - MP_DPS),
    cos=_mp_ufunc(mpmath.cos), sin=_mp_ufunc(mpmath.sin), cosh=_mp_ufunc(mpmath.cosh),
    sinh=_mp_ufunc(mpmath.sinh), exp=_mp_ufunc(mpmath.exp), sqrt=_mp_ufunc(mpmath.sqrt),
    log=_mp_ufunc(mpmath.log), tan=_mp_ufunc(mpmath.tan), arccos=_mp_ufunc(mpmath.acos),
    rule=lambda n: _mp_gauss_legendre(n, MP_DPS), start=64, cap=1024,
)


def _pi(xp):
    return xp.pi if xp.pi is not None else +mpmath.pi


def _mapped_rule(a, b, n, xp=LD):
    x, w = xp.rule(n)
    half = (b - a) / 2
    return half * x + (b + a) / 2, half * w


def _pv_fixed(g, phi, n, xp=LD):
    """One PV evaluation at order ``n`` per sub-interval; returns (value, peak)."""
    g_pole = np.asarray(g(np.array([phi], dtype=xp.dtype)))[0]
    total = xp.num(0)
    peak = abs(g_pole)
    for a, b in ((xp.num(0), phi), (phi, _pi(xp))):
        theta, w = _mapped_rule(a, b, n, xp)
        vals = np.asarray(g(theta))
        # t - cos(theta) in product form, free of cancellation near the pole
        gap = 2 * xp.sin((theta + phi) / 2) * xp.sin((theta - phi) / 2)
        sin_th = xp.sin(theta)
        total = total + np.sum(w * (vals - g_pole) * sin_th / gap)
        peak = max(peak, np.max(np.abs(vals * sin_th)))
    log_term = 2 * xp.log(1 / xp.tan(phi / 2))  # ln((1+t)/(1-t)) at t = cos(phi)
    return (total + g_pole * log_term) / _pi(xp), peak


def _pv_refined(g, t, quad_order=None, tol=1e-10, max_order=None, xp=LD):
    """Doubling driver shared by the public entry points.

    Returns the value in the backend's precision and the integrand peak
    (used as the rounding scale).  ``quad_order`` and ``max_order`` default
    to the backend's start order and cap.
    """
    quad_order = xp.start if quad_order is None else quad_order
    max_order = xp.cap if max_order is None else max_order
    if not abs(float(t)) < 1:
        raise DomainError(f"pole location must lie in (-1, 1), got {t}")
    if quad_order < 16:
        raise ValueError("quad_order must be at least 16")
    with mpmath.workdps(MP_DPS):
        t = xp.num(t)
        phi = xp.arccos(t)
        n = int(quad_order)
        prev, peak = _pv_fixed(g, phi, n, xp)
        while 2 * n <= max_order:
            n *= 2
            cur, peak = _pv_fixed(g, phi, n, xp)
            floor = _NOISE_ULPS * xp.eps * float(peak)
            if float(abs(cur - prev)) <= max(tol, floor):
                return cur, peak
            prev = cur
    raise ConvergenceError(
        f"PV quadrature at t={float(t)} did not settle below {tol} by order {max_order}"
    )


PRECISIONS = ("extended", "mp", "auto")


def _needs_mp(peak, tol):
    return _NOISE_ULPS * LD.eps * float(peak) > tol / 10


def integrate(g, t=None, *, quad_order=None, tol=1e-10, max_order=None, precision="extended"):
    """Shared driver: PV integral at pole ``t`` or, with ``t=None``, the angular mean.

    With ``precision="extended"`` the integrand is ``g(theta)``; with
    ``"mp"`` or ``"auto"`` it is ``g(theta, xp)`` where ``xp`` is the
    arithmetic namespace (``LD`` or ``MP``).  ``"auto"`` evaluates in long
    double and repeats with mpmath when the rounding floor of the
    integrand peak is not safely below ``tol``.  ``quad_order`` and
    ``max_order`` apply to the long-double stage; the mpmath stage starts
    at ``MP.start`` and is capped at ``MP.cap``.

    Returns (value, peak, backend).
    """
    if precision not in PRECISIONS:
        raise ValueError(f"precision must be one of {PRECISIONS}, got {precision!r}")

    def run(xp):
        fn = g if precision == "extended" else (lambda th: g(th, xp))
        order = quad_order if xp is LD else None
        if t is None:
            if xp is MP:
                order = 2 * MP.start
            value, peak = _angular(fn, order, xp)
        else:
            value, peak = _pv_refined(fn, t, order, tol, max_order if xp is LD else None, xp)
        return value, peak, xp

    if precision == "mp":
        return run(MP)
    value, peak, xp = run(LD)
    if precision == "auto" and _needs_mp(peak, tol):
        return run(MP)
    return value, peak, xp


def pv_integral(g, t, quad_order=DEFAULT_ORDER, tol=1e-10, max_order=MAX_ORDER,
                precision="extended") -> complex:
    """(1/pi) PV int_{-1}^{1} g(s)/(t - s) ds.

    Parameters
    ----------
    g : callable
        Vectorized integrand in the angular variable, ``g(theta) = g(cos theta)``.
        It must be smooth on (0, pi) after multiplication by sin(theta).
        For ``precision`` other than "extended" it is called as
        ``g(theta, xp)`` and must use ``xp.cos``, ``xp.sinh`` etc.
    t : float
        Pole location in (-1, 1).
    quad_order : int
        Starting Gauss-Legendre order on each side of the pole.  The order
        is doubled until two successive results agree within ``tol`` (or
        within the rounding floor of the integrand peak).
    tol : float
        Absolute agreement required between successive orders.
    max_order : int
        Cap on the per-side order; exceeding it raises ConvergenceError.
    precision : {"extended", "mp", "auto"}
        Long double, mpmath at ``MP_DPS`` digits, or long double with an
        mpmath retry when the integrand is too large for ``tol``.

    Returns
    -------
    complex
    """
    value, _, _ = integrate(g, t, quad_order=quad_order, tol=tol, max_order=max_order,
                            precision=precision)
    return complex(value)


def _angular(g, quad_order=None, xp=LD):
    quad_order = xp.start if quad_order is None else quad_order
    with mpmath.workdps(MP_DPS):
        theta, w = _mapped_rule(xp.num(0), _pi(xp), int(quad_order), xp)
        vals = np.asarray(g(theta))
        return np.sum(w * vals) / _pi(xp), np.max(np.abs(vals))


def angular_integral(g, quad_order=DEFAULT_ORDER, precision="extended") -> complex:
    """(1/pi) int_0^pi g(theta) dtheta with a fixed Gauss-Legendre rule.

    ``precision`` is as for :func:`pv_integral`.
    """
    if quad_order < 1:
        raise ValueError("quad_order must be positive")
    value, _, _ = integrate(g, None, quad_order=quad_order, precision=precision)
    return complex(value)


def _cosh_kernel_integrand(f, mu, s):
    s = EXT(s)

    def g(theta):
        return np.cosh(mu * (s - np.cos(theta))) * f(theta)

    return g


def forward_cosh_fht(f, mu, s, quad_order=DEFAULT_ORDER, tol=1e-10, max_order=MAX_ORDER):
    """Cosh-weighted finite Hilbert transform H_mu f at ``s``.

    F_mu(s) = (1/pi) PV int cosh[mu (s - t)] f(t) / (s - t) dt, with
    ``f`` given in the angular variable (``f(theta) = f(cos theta)``).
    ``s`` may be a scalar or an array of points in (-1, 1).
    """
    mu = as_mu(mu)
    s_arr = np.asarray(s, dtype=float)
    out = np.empty(s_arr.shape, dtype=complex)
    for idx, sv in np.ndenumerate(s_arr):
        g = _cosh_kernel_integrand(f, mu, sv)
        out[idx] = complex(_pv_refined(g, sv, quad_order, tol, max_order)[0])
    return out[()] if out.ndim == 0 else out
