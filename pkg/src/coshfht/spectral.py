"""Chebyshev-node discretization and the explicit inverse operators.

The grid is theta_m = (m + 1/2) pi / N with t_m = cos(theta_m).  Two real
matrices

    C[m, n] = sqrt(2/N) cos((m + 1/2) n pi / N)
    S[m, n] = sqrt(2/N) sin((m + 1/2) n pi / N)

realize the finite Hilbert transform pairs on the grid: ``S C^T`` sends
samples of cos(k theta) to sin(k theta) and ``C S^T`` sends sin(k theta)
back to cos(k theta), for 1 <= k <= N - 1.

Matrix entries are formed from the integer phase ((2m + 1) n) mod 4N, so
every entry is a correctly rounded trig value no matter how large m n is.
The inversion products and prefactors run in long double and return
complex128; at |mu| ~ 8 pi the prefactors reach ~1e10 and double
precision costs several digits of the reconstruction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .cheb_basis import as_mu
from .errors import DomainError, MissingMomentError, RangeWarning, SingularWeightError
from .quadrature import EXT, PI

__all__ = [
    "ChebGrid",
    "GridFunction",
    "TransformMatrices",
    "FamilyParams",
    "make_grid",
    "make_transform_matrices",
    "cos_to_sin",
    "sin_to_cos",
    "invert_d",
    "invert_m",
    "reconstruct_with_moment",
    "invert_family",
    "moment_cosh",
    "range_functional_d",
]

CEXT = np.clongdouble


@dataclass(frozen=True)
class ChebGrid:
    """Chebyshev-interior nodes theta_m = (m + 1/2) pi / N, t_m = cos theta_m."""

    N: int

    @cached_property
    def theta_ext(self) -> np.ndarray:
        return (np.arange(self.N).astype(EXT) + EXT(0.5)) * PI / self.N

    @cached_property
    def theta(self) -> np.ndarray:
        return self.theta_ext.astype(float)

    @cached_property
    def t(self) -> np.ndarray:
        return np.cos(self.theta_ext).astype(float)

    @property
    def weight(self) -> float:
        """Midpoint weight pi/N of the node rule on [0, pi]."""
        return np.pi / self.N


@dataclass(frozen=True)
class TransformMatrices:
    """The cosine and sine matrices of a grid, in double and long double."""

    C: np.ndarray
    S: np.ndarray
    C_ext: np.ndarray
    S_ext: np.ndarray

    @property
    def N(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True)
class FamilyParams:
    """Coefficients of the quadratic weight alpha s^2 + beta s + gamma."""

    alpha: complex = 0
    beta: complex = 0
    gamma: complex = 1

    def weight(self, t):
        return self.alpha * t * t + self.beta * t + self.gamma


class GridFunction:
    """Complex samples on a :class:`ChebGrid`.

    ``space`` records whether the samples were taken as g(theta_m)
    ("angular") or g(t_m) ("spatial"); on the grid the two coincide.
    """

    __slots__ = ("grid", "values", "space")

    def __init__(self, grid: ChebGrid, values, space: str = "angular"):
        values = np.asarray(values, dtype=complex)
        if values.shape != (grid.N,):
            raise DomainError(f"expected {grid.N} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DomainError("grid samples must be finite")
        if space not in ("angular", "spatial"):
            raise ValueError(f"unknown space tag {space!r}")
        self.grid = grid
        self.values = values
        self.space = space

    @classmethod
    def sample(cls, grid: ChebGrid, func, space: str = "angular") -> "GridFunction":
        """Sample ``func`` at theta_m (angular) or t_m (spatial)."""
        x = grid.theta if space == "angular" else grid.t
        return cls(grid, np.broadcast_to(func(x), (grid.N,)), space)

    def norm(self) -> float:
        """Discrete L2[0, pi] norm, sqrt((pi/N) sum |g_m|^2)."""
        return float(np.sqrt(self.grid.weight * np.sum(np.abs(self.values) ** 2)))

    def __len__(self):
        return self.grid.N

    def __repr__(self):
        return f"GridFunction(N={self.grid.N}, space={self.space!r})"


@lru_cache(maxsize=32)
def make_grid(N: int) -> ChebGrid:
    """Grid of N Chebyshev-interior nodes; N must be a positive integer."""
    if isinstance(N, (bool, np.bool_)) or int(N) != N or N < 1:
        raise DomainError(f"grid size must be a positive integer, got {N!r}")
    return ChebGrid(int(N))


@lru_cache(maxsize=8)
def _matrices(N: int) -> TransformMatrices:
    m = np.arange(N, dtype=np.int64)[:, None]
    n = np.arange(N, dtype=np.int64)[None, :]
    # (m + 1/2) n pi / N = k pi / (2N) with k reduced mod 4N before any rounding
    k = ((2 * m + 1) * n) % (4 * N)
    angle = k.astype(EXT) * PI / (2 * N)
    scale = np.sqrt(EXT(2) / N)
    C_ext, S_ext = scale * np.cos(angle), scale * np.sin(angle)
    S_ext[:, 0] = 0
    mats = TransformMatrices(C_ext.astype(float), S_ext.astype(float), C_ext, S_ext)
    for a in (mats.C, mats.S, mats.C_ext, mats.S_ext):
        a.setflags(write=False)
    return mats


def make_transform_matrices(grid: ChebGrid) -> TransformMatrices:
    """C and S for ``grid`` (cached per N; arrays are read-only)."""
    return _matrices(grid.N)


# --- discrete singular integrals -------------------------------------------


def _values(g, grid=None):
    if isinstance(g, GridFunction):
        if grid is not None and g.grid.N != grid.N:
            raise DomainError(f"grid mismatch: N={g.grid.N} vs N={grid.N}")
        return g.grid, g.values
    v = np.asarray(g)
    if v.ndim not in (1, 2):
        raise DomainError("expected samples as a vector or an (N, k) array")
    if grid is not None and v.shape[0] != grid.N:
        raise DomainError(f"expected {grid.N} samples, got {v.shape[0]}")
    return (grid or make_grid(v.shape[0])), v


def _wrap(grid, out, like):
    out = np.asarray(out).astype(complex)
    if out.ndim == 1:
        return GridFunction(grid, out, getattr(like, "space", "angular"))
    return out


def _apply(A, B, v, extended):
    # A (B^T v), keeping the real and imaginary parts in the matrix dtype
    v = np.asarray(v)
    if extended:
        v = v.astype(CEXT) if np.iscomplexobj(v) else v.astype(EXT)
    if np.iscomplexobj(v):
        return A @ (B.T @ v.real) + 1j * (A @ (B.T @ v.imag))
    return A @ (B.T @ v)


def cos_to_sin(g, *, extended: bool = True):
    """Apply S C^T: cos(k theta) samples -> sin(k theta) samples.

    Parameters
    ----------
    g : GridFunction or array_like
        Samples on the grid; a 2-D (N, k) array transforms column-wise and
        is returned as a complex array.
    extended : bool
        Accumulate in long double (default) or double precision.
    """
    grid, v = _values(g)
    M = make_transform_matrices(grid)
    S, C = (M.S_ext, M.C_ext) if extended else (M.S, M.C)
    return _wrap(grid, _apply(S, C, v, extended), g)


def sin_to_cos(g, *, extended: bool = True):
    """Apply C S^T: sin(k theta) samples -> cos(k theta) samples."""
    grid, v = _values(g)
    M = make_transform_matrices(grid)
    C, S = (M.C_ext, M.S_ext) if extended else (M.C, M.S)
    return _wrap(grid, _apply(C, S, v, extended), g)


# --- inverses ---------------------------------------------------------------


def _prefactors(grid, mu):
    th = grid.theta_ext
    sin_th = np.sin(th)
    arg = CEXT(mu) * sin_th
    return sin_th, np.cos(arg), np.sin(arg)


def _ext_values(F, grid=None):
    grid, v = _values(F, grid)
    if np.ndim(v) != 1:
        raise DomainError("inverse operators take a single vector of samples")
    return grid, np.asarray(v).astype(CEXT)


def _SCt(grid, v):
    M = make_transform_matrices(grid)
    return _apply(M.S_ext, M.C_ext, v, True)


def _CSt(grid, v):
    M = make_transform_matrices(grid)
    return _apply(M.C_ext, M.S_ext, v, True)


def _family_core(grid, F, mu, q):
    # cos(mu sin phi)/q(t) S C^T[cos(mu sin th) q F] - sin(mu sin phi) C S^T[sin(mu sin th) F]
    _, c, s = _prefactors(grid, mu)
    first = _SCt(grid, c * q * F)
    if not np.all(q == 1):
        first = first / q
    return c * first - s * _CSt(grid, s * F)


def range_functional_d(F, mu) -> complex:
    """(pi/N) sum_m cos(mu sin theta_m) F_m.

    Discrete form of int cos(mu sqrt(1-t^2))/sqrt(1-t^2) F(t) dt; it
    vanishes on the range of the d-inverse.
    """
    mu = as_mu(mu)
    grid, v = _ext_values(F)
    _, c, _ = _prefactors(grid, mu)
    return complex(np.sum(c * v) * PI / grid.N)


def moment_cosh(f, mu) -> complex:
    """int_{-1}^{1} cosh(mu t) f(t) dt by the node rule (pi/N) sum sin(theta_m) cosh(mu t_m) f_m.

    Unnormalized; the ``moment`` arguments of the reconstruction routines
    are this value divided by pi.
    """
    mu = as_mu(mu)
    grid, v = _ext_values(f)
    th = grid.theta_ext
    return complex(np.sum(np.sin(th) * np.cosh(CEXT(mu) * np.cos(th)) * v) * PI / grid.N)


def invert_d(F, mu, *, range_tol: float | None = 1e-6) -> GridFunction:
    """d-inverse of the cosh-weighted FHT on the grid.

    f(phi) = cos(mu sin phi) [S C^T a](phi) - sin(mu sin phi) [C S^T b](phi)

    with a = cos(mu sin theta) F and b = sin(mu sin theta) F.

    Parameters
    ----------
    F : GridFunction or array_like
        Transform samples at the nodes.
    mu : complex
    range_tol : float or None
        Emit :class:`RangeWarning` when |range_functional_d(F)| exceeds
        ``range_tol * ||F||``.  The result is returned either way; pass
        None to skip the check.

    Returns
    -------
    GridFunction
    """
    mu = as_mu(mu)
    grid, v = _ext_values(F)
    if range_tol is not None:
        rf = range_functional_d(F, mu)
        scale = float(np.sqrt(grid.weight * np.sum(np.abs(v) ** 2)))
        if abs(rf) > range_tol * scale:
            warnings.warn(
                f"data lies outside the range of the d-inverse (functional {abs(rf):.3g}, "
                f"norm {scale:.3g}); returning the pseudo-inverse",
                RangeWarning,
                stacklevel=2,
            )
    out = _family_core(grid, v, mu, CEXT(1))
    return GridFunction(grid, out.astype(complex), getattr(F, "space", "angular"))


def invert_m(F, mu) -> GridFunction:
    """m-inverse: the zero-moment preimage of F.

    f(phi) = -cos(mu sin phi)/sin(phi) [C S^T (cos(mu sin theta) sin(theta) F)]
             - sin(mu sin phi) [C S^T (sin(mu sin theta) F)]

    The division by sin(phi) is finite on the interior grid but amplifies
    errors near the end nodes.
    """
    mu = as_mu(mu)
    grid, v = _ext_values(F)
    sin_th, c, s = _prefactors(grid, mu)
    out = -c / sin_th * _CSt(grid, c * sin_th * v) - s * _CSt(grid, s * v)
    return GridFunction(grid, out.astype(complex), getattr(F, "space", "angular"))


def _null_samples(grid, mu):
    sin_th, c, _ = _prefactors(grid, mu)
    return c / sin_th


def reconstruct_with_moment(F, mu, moment) -> GridFunction:
    """invert_m(F) plus ``moment`` times the null function.

    ``moment`` is (1/pi) int cosh(mu t) f(t) dt for the unknown source f.
    """
    mu = as_mu(mu)
    grid, _ = _ext_values(F)
    base = invert_m(F, mu)
    out = base.values.astype(CEXT) + CEXT(complex(moment)) * _null_samples(grid, mu)
    return GridFunction(grid, out.astype(complex), base.space)


def invert_family(F, mu, params: FamilyParams, moment=None) -> GridFunction:
    """Inverse from the quadratic-weight family q(s) = alpha s^2 + beta s + gamma.

    f(phi) = cos(mu sin phi)/q(t) [S C^T (cos(mu sin theta) q F)]
             - sin(mu sin phi) [C S^T (sin(mu sin theta) F)]
             - alpha sin(phi) cos(mu sin phi) moment / q(t)

    with t = cos(phi).  ``moment`` is the (1/pi)-normalized cosh moment of
    the source and is required exactly when alpha != 0.  With q = 1 this
    is the d-inverse.

    Raises
    ------
    SingularWeightError
        If q vanishes (to round-off) at a grid node.
    MissingMomentError
        If alpha != 0 and no moment is given.
    """
    mu = as_mu(mu)
    grid, v = _ext_values(F)
    alpha, beta, gamma = (complex(x) for x in (params.alpha, params.beta, params.gamma))
    if alpha != 0 and moment is None:
        raise MissingMomentError("the quadratic family with alpha != 0 needs the cosh moment of f")
    t = np.cos(grid.theta_ext)
    q = CEXT(alpha) * t * t + CEXT(beta) * t + CEXT(gamma)
    scale = max(abs(alpha), abs(beta), abs(gamma), 1.0)
    if np.any(np.abs(q) <= 64 * np.finfo(float).eps * scale):
        raise SingularWeightError("quadratic weight vanishes at a grid node")
    out = _family_core(grid, v, mu, q)
    if alpha != 0:
        sin_th, c, _ = _prefactors(grid, mu)
        out = out - CEXT(alpha) * sin_th * c * CEXT(complex(moment)) / q
    return GridFunction(grid, out.astype(complex), getattr(F, "space", "angular"))
