"""Chebyshev polynomials and the exponential Chebyshev functions.

The exponential Chebyshev functions are the mu-deformed polynomials

    T_{mu,n}(cos th)   = cos(n th - mu sin th)
    U_{mu,n-1}(cos th) = sin(n th - mu sin th) / sin th

which reduce to T_n and U_{n-1} at mu = 0.  All evaluators are vectorized
in ``t`` and keep the floating dtype of their argument, so extended
precision (``numpy.longdouble``) inputs stay extended.
"""

from __future__ import annotations

import cmath

import numpy as np

from .errors import DomainError

__all__ = [
    "as_mu",
    "chebyshev_T",
    "chebyshev_U",
    "exp_cheb_T",
    "exp_cheb_U",
    "null_function",
    "sqrt1m",
]


def as_mu(mu) -> complex:
    """Validate a transform parameter and return it as a Python complex."""
    try:
        z = complex(mu)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"mu must be a complex scalar, got {mu!r}") from exc
    if not cmath.isfinite(z):
        raise DomainError(f"mu must be finite, got {z!r}")
    return z


def _as_degree(n) -> int:
    if isinstance(n, (bool, np.bool_)) or int(n) != n or n < 0:
        raise DomainError(f"degree must be a non-negative integer, got {n!r}")
    return int(n)


def _as_nodes(t, closed=True):
    t = np.asarray(t)
    if not np.issubdtype(t.dtype, np.floating):
        t = t.astype(float)
    bad = np.abs(t) > 1 if closed else np.abs(t) >= 1
    if np.any(bad) or np.any(np.isnan(t)):
        interval = "[-1, 1]" if closed else "(-1, 1)"
        raise DomainError(f"t must lie in {interval}")
    return t


def _scalarize(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def sqrt1m(t):
    """sqrt(1 - t^2) evaluated as sqrt((1 - t)(1 + t)) to keep accuracy near |t| = 1."""
    t = np.asarray(t)
    return np.sqrt((1 - t) * (1 + t))


def chebyshev_T(n, t):
    """First-kind Chebyshev polynomial T_n(t) by the three-term recurrence."""
    n = _as_degree(n)
    t = _as_nodes(t)
    prev, cur = np.ones_like(t), t.copy()
    if n == 0:
        return _scalarize(prev)
    for _ in range(n - 1):
        prev, cur = cur, 2 * t * cur - prev
    return _scalarize(cur)


def chebyshev_U(n, t):
    """Second-kind Chebyshev polynomial U_n(t) by the three-term recurrence."""
    n = _as_degree(n)
    t = _as_nodes(t)
    prev, cur = np.ones_like(t), 2 * t
    if n == 0:
        return _scalarize(prev)
    for _ in range(n - 1):
        prev, cur = cur, 2 * t * cur - prev
    return _scalarize(cur)


def exp_cheb_T(mu, n, t):
    """Exponential Chebyshev function of the first kind, T_{mu,n}(t).

    Evaluated through the angle form cos(n th - mu sin th) with t = cos th.
    At t = +-1 this is the continuous limit (+-1)^n.
    """
    mu = as_mu(mu)
    n = _as_degree(n)
    t = _as_nodes(t)
    theta = np.arccos(t)
    return _scalarize(np.cos(n * theta - mu * sqrt1m(t)))


def exp_cheb_U(mu, n, t):
    """Exponential Chebyshev function of the second kind, U_{mu,n}(t).

    Equals sin((n+1) th - mu sin th) / sin th for t = cos th.  The
    endpoint values are the limits n + 1 - mu at t = 1 and
    (-1)^n (n + 1 + mu) at t = -1.
    """
    mu = as_mu(mu)
    n = _as_degree(n)
    t = _as_nodes(t)
    theta = np.arccos(t)
    s = sqrt1m(t)
    interior = s > 0
    safe = np.where(interior, s, 1)
    val = np.sin((n + 1) * theta - mu * s) / safe
    ends = np.where(t > 0, n + 1 - mu, (-1) ** n * (n + 1 + mu))
    return _scalarize(np.where(interior, val, ends))


def null_function(mu, t):
    """cos(mu sqrt(1-t^2)) / sqrt(1-t^2), the null-space generator of H_mu.

    Only defined on the open interval; raises DomainError at |t| >= 1.
    """
    mu = as_mu(mu)
    t = _as_nodes(t, closed=False)
    s = sqrt1m(t)
    return _scalarize(np.cos(mu * s) / s)

