"""Analytic transform pairs, noise injection, error metrics and the experiment runner."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .cheb_basis import as_mu
from .errors import DomainError
from .identities import cheb_first_kind_transform, cheb_second_kind_transform
from .quadrature import DEFAULT_ORDER, angular_integral, forward_cosh_fht
from .spectral import (
    FamilyParams,
    GridFunction,
    invert_d,
    invert_family,
    invert_m,
    make_grid,
    reconstruct_with_moment,
)

__all__ = [
    "AnalyticPair",
    "NoiseSpec",
    "Metrics",
    "ExperimentReport",
    "METHODS",
    "catalog_names",
    "pair_catalog",
    "pair_moment",
    "pair_residual",
    "add_noise",
    "metrics",
    "run_experiment",
    "noise_study",
]

METHODS = ("invert_d", "invert_m", "reconstruct", "family")
MAX_CLASSICAL = 6


@dataclass(frozen=True)
class AnalyticPair:
    """A closed-form pair (f, F = H_mu f), both evaluated at angles theta.

    ``f(theta)`` is the source at t = cos(theta) and ``F(theta)`` the
    transform at s = cos(theta).  ``in_ld`` marks sources in the weighted
    space with weight 1/sqrt(1 - t^2), the domain on which the d-inverse
    recovers f exactly.
    """

    name: str
    mu: complex
    f: Callable
    F: Callable
    formula: str
    notes: str = ""
    in_ld: bool = True


def catalog_names(max_n: int = MAX_CLASSICAL) -> list[str]:
    names = ["pair45", "pair47", "pair48", "null"]
    names += [f"classical_u{n}" for n in range(max_n + 1)]
    names += [f"classical_t{n}" for n in range(1, max_n + 1)]
    return names


def _second_kind(mu, n):
    # f = U_{mu,n}(t) sqrt(1-t^2) = sin((n+1) theta - mu sin theta)
    def f(th):
        return np.sin((n + 1) * th - mu * np.sin(th)) + 0j

    def F(th):
        return cheb_second_kind_transform(mu, n + 1, np.cos(th)) + 0j

    return f, F


def _first_kind(mu, n):
    # f = T_{mu,n}(t)/sqrt(1-t^2)
    def f(th):
        return np.cos(n * th - mu * np.sin(th)) / np.sin(th) + 0j

    def F(th):
        return cheb_first_kind_transform(mu, n, np.cos(th)) + 0j

    return f, F


_CLASSICAL = re.compile(r"classical_(?P<kind>[ut]?)(?P<n>\d+)$")


def pair_catalog(name: str, mu) -> AnalyticPair:
    """Look up a catalog pair at parameter ``mu``.

    Names: ``pair45``, ``pair47``, ``pair48``, ``null``,
    ``classical_u{n}`` (source U_{mu,n} sqrt(1-t^2), 0 <= n <= 6) and
    ``classical_t{n}`` (source T_{mu,n}/sqrt(1-t^2), 1 <= n <= 6).
    ``classical_{n}`` is shorthand for ``classical_u{n}``.  At mu = 0 the
    classical families are the textbook Chebyshev pairs.
    """
    mu = as_mu(mu)
    if name == "pair45":
        return AnalyticPair(
            name, mu,
            lambda th: np.cos(mu * np.sin(th)) * np.sin(th) + 0j,
            lambda th: np.cos(th) * np.cosh(mu * np.cos(th)) - mu / 2 * np.sinh(mu * np.cos(th)) + 0j,
            "f = cos(mu sin th) sin th;  F = cos th cosh(mu cos th) - (mu/2) sinh(mu cos th)",
        )
    if name == "pair47":
        return AnalyticPair(
            name, mu,
            lambda th: np.sin(mu * np.sin(th)) + 0j,
            lambda th: np.sinh(mu * np.cos(th)) + 0j,
            "f = sin(mu sin th);  F = sinh(mu cos th)",
        )
    if name == "pair48":
        f, _ = _second_kind(mu, 1)

        def F48(th):
            c = np.cos(th)
            return 0.5 * np.exp(-mu * c) * (4 * c * c + 2 * mu * c + 0.5 * mu * mu - 2) + 0j

        return AnalyticPair(
            name, mu, f, F48,
            "f = sin(2 th - mu sin th);  F = 0.5 exp(-mu cos th)[4cos^2 th + 2 mu cos th + mu^2/2 - 2]",
            "the exponent sign is the one the forward quadrature confirms",
        )
    if name == "null":
        return AnalyticPair(
            name, mu,
            lambda th: np.cos(mu * np.sin(th)) / np.sin(th) + 0j,
            lambda th: np.zeros(np.shape(th), dtype=complex),
            "f = cos(mu sin th)/sin th;  F = 0",
            "spans the null space; not square integrable against 1/sqrt(1-t^2)",
            in_ld=False,
        )
    m = _CLASSICAL.match(name)
    if m:
        n = int(m["n"])
        if n > MAX_CLASSICAL:
            raise KeyError(f"classical pairs go up to n = {MAX_CLASSICAL}, got {name!r}")
        if m["kind"] == "t":
            if n < 1:
                raise KeyError("classical_t needs n >= 1 (n = 0 is the null pair)")
            f, F = _first_kind(mu, n)
            return AnalyticPair(
                name, mu, f, F,
                f"f = cos({n} th - mu sin th)/sin th;  F = -exp(-mu t) sum_k mu^k/k! U_{{{n}-1-k}}(t)",
                "source is T_{mu,n}/sqrt(1-t^2), outside the d-inverse domain",
                in_ld=False,
            )
        f, F = _second_kind(mu, n)
        return AnalyticPair(
            f"classical_u{n}", mu, f, F,
            f"f = sin({n + 1} th - mu sin th);  F = H_mu applied in closed form (T_{n + 1} at mu = 0)",
        )
    raise KeyError(f"unknown pair {name!r}; known: {', '.join(catalog_names())}")


def pair_moment(pair: AnalyticPair, quad_order: int = DEFAULT_ORDER) -> complex:
    """(1/pi) int cosh(mu t) f(t) dt for the pair's source, by quadrature."""
    mu = pair.mu
    return angular_integral(lambda th: np.cosh(mu * np.cos(th)) * pair.f(th) * np.sin(th), quad_order)


def pair_residual(pair: AnalyticPair, s) -> float:
    """max |forward_cosh_fht(f)(s) - F(s)| over the points ``s``."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    lhs = forward_cosh_fht(pair.f, pair.mu, s)
    rhs = pair.F(np.arccos(s))
    return float(np.max(np.abs(lhs - rhs)))


# --- noise and metrics -------------------------------------------------------


@dataclass(frozen=True)
class NoiseSpec:
    """Gaussian noise level and seed; ``stream`` separates runs sharing a seed."""

    sigma: float = 0.0
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        if not (np.isfinite(self.sigma) and self.sigma >= 0):
            raise DomainError(f"sigma must be finite and non-negative, got {self.sigma!r}")
        for label, v in (("seed", self.seed), ("stream", self.stream)):
            if int(v) != v or not 0 <= v < 2**64:
                raise DomainError(f"{label} must be an unsigned 64-bit integer, got {v!r}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng([int(self.seed), int(self.stream)])


def add_noise(F: GridFunction, spec: NoiseSpec) -> GridFunction:
    """F plus i.i.d. N(0, sigma^2) noise on the real part.

    When F has a nonzero imaginary part an independent draw is added to
    it as well.  sigma = 0 returns an unchanged copy.
    """
    values = F.values.copy()
    if spec.sigma > 0:
        rng = spec.rng()
        n = F.grid.N
        noise = rng.normal(0.0, spec.sigma, n)
        if np.any(values.imag != 0):
            noise = noise + 1j * rng.normal(0.0, spec.sigma, n)
        values = values + noise
    return GridFunction(F.grid, values, F.space)


@dataclass(frozen=True)
class Metrics:
    nsr_percent: float
    mse: float

    @property
    def defined(self) -> bool:
        return bool(np.isfinite(self.nsr_percent))

    @property
    def nsr_display(self) -> str:
        return f"{self.nsr_percent:.2f}" if self.defined else "undefined"


def metrics(rec: GridFunction, truth: GridFunction) -> Metrics:
    """Discrete L2[0, pi] error.

    mse = (pi/N) sum |rec - truth|^2 and nsr = 100 sqrt(mse) / ||truth||.
    A zero truth gives nsr = nan (check ``Metrics.defined``).
    """
    if rec.grid.N != truth.grid.N:
        raise DomainError("metrics need samples on the same grid")
    w = truth.grid.weight
    mse = float(w * np.sum(np.abs(rec.values - truth.values) ** 2))
    norm = truth.norm()
    nsr = 100.0 * np.sqrt(mse) / norm if norm > 0 else float("nan")
    return Metrics(float(nsr), mse)


# --- runner -------------------------------------------------------------------


@dataclass
class ExperimentReport:
    pair: str
    method: str
    mu: complex
    N: int
    noise: NoiseSpec
    nsr_percent: float
    mse: float
    theta: np.ndarray = field(repr=False)
    truth: np.ndarray = field(repr=False)
    rec: np.ndarray = field(repr=False)
    family: FamilyParams | None = None
    moment: complex | None = None

    @property
    def samples(self):
        """Per-node (theta, f_true, f_rec) triples."""
        return list(zip(self.theta, self.truth, self.rec))

    def to_dict(self, samples: bool = True) -> dict:
        out = {
            "pair": self.pair,
            "method": self.method,
            "mu": [self.mu.real, self.mu.imag],
            "n": self.N,
            "sigma": self.noise.sigma,
            "seed": self.noise.seed,
            "nsr_percent": self.nsr_percent if np.isfinite(self.nsr_percent) else None,
            "mse": self.mse,
        }
        if self.family is not None:
            out["family"] = [[complex(x).real, complex(x).imag]
                             for x in (self.family.alpha, self.family.beta, self.family.gamma)]
        if self.moment is not None:
            out["moment"] = [self.moment.real, self.moment.imag]
        if samples:
            out["samples"] = [
                [float(th), float(a.real), float(a.imag), float(b.real), float(b.imag)]
                for th, a, b in zip(self.theta, self.truth, self.rec)
            ]
        return out


def run_experiment(pair, mu, N: int = 1000, noise: NoiseSpec | None = None, method: str = "invert_d",
                   family: FamilyParams | None = None, moment=None) -> ExperimentReport:
    """Sample a catalog pair, add noise, invert and score against the source.

    Methods
    -------
    invert_d
        The d-inverse.
    invert_m
        The bare m-inverse (zero-moment representative).
    reconstruct
        The m-inverse plus the moment term.
    family
        The quadratic-weight inverse with ``family`` parameters
        (default beta = 1, gamma = 1).

    The moment, where needed and not supplied, is computed from the known
    source by quadrature.
    """
    mu = as_mu(mu)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    p = pair if isinstance(pair, AnalyticPair) else pair_catalog(pair, mu)
    if p.mu != mu:
        raise DomainError(f"pair was built for mu={p.mu}, run requested mu={mu}")
    noise = NoiseSpec() if noise is None else noise
    grid = make_grid(N)
    truth = GridFunction.sample(grid, p.f)
    F = add_noise(GridFunction.sample(grid, p.F), noise)

    if method == "family":
        family = FamilyParams(0, 1, 1) if family is None else family
        if complex(family.alpha) != 0 and moment is None:
            moment = pair_moment(p)
    elif method == "reconstruct" and moment is None:
        moment = pair_moment(p)

    if method == "invert_d":
        rec = invert_d(F, mu, range_tol=None)
    elif method == "invert_m":
        rec = invert_m(F, mu)
    elif method == "reconstruct":
        rec = reconstruct_with_moment(F, mu, moment)
    else:
        rec = invert_family(F, mu, family, moment)

    m = metrics(rec, truth)
    return ExperimentReport(
        p.name, method, mu, grid.N, noise, m.nsr_percent, m.mse,
        grid.theta.copy(), truth.values, rec.values,
        family if method == "family" else None,
        None if moment is None else complex(moment),
    )


def noise_study(pair, mu, sigmas, seeds=range(20), N: int = 1000, method: str = "invert_d") -> dict:
    """Mean nsr over ``seeds`` for each noise level; the seed index is the stream."""
    out = {}
    for sigma in sigmas:
        vals = [
            run_experiment(pair, mu, N, NoiseSpec(float(sigma), int(seed), stream=k), method).nsr_percent
            for k, seed in enumerate(seeds)
        ]
        out[float(sigma)] = float(np.mean(vals))
    return out
