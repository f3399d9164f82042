"""Identity catalog: examples, conventions fixed by quadrature, and the runner."""

import dataclasses
import math

import numpy as np
import pytest

from coshfht.cheb_basis import chebyshev_U
from coshfht.identities import (
    CHEB_IDS,
    EXPONENT_SIGN,
    FAMILY_WEIGHTS,
    LEMMA_IDS,
    check_identity,
    identity_catalog,
    identity_grid,
    make_case,
    run_catalog,
)
from coshfht.quadrature import LD, pv_integral


def lhs(case, p):
    g = case.integrand(p, LD)
    return pv_integral(g, p["t"])


def test_identity_grid():
    g = identity_grid()
    assert g.shape == (7,)
    assert np.all(np.abs(g) <= 0.95) and np.all(np.diff(g) < 0)


class TestExamples:
    def test_odd_first_moment_at_zero_mu(self):
        case = make_case("I2_2", 0.0, grid=[0.3])
        rep = check_identity(case)
        assert rep.max_residual < 1e-15
        assert abs(complex(case.rhs({"u": 0.3}, LD))) == 0

    def test_weighted_sqrt_identity_on_diagonal(self):
        case = make_case("I2_5", 1.0, grid=[0.4])
        p = {"t": 0.4, "u": 0.4}
        expected = 0.4 * np.cosh(0.4) - 0.5 * np.sinh(0.4)
        assert complex(case.rhs(p, LD)) == pytest.approx(expected, abs=1e-15)
        assert lhs(case, p) == pytest.approx(expected, abs=1e-14)

    def test_cosh_kernel_chebyshev_example(self):
        case = make_case("I3_19", 1.0, n_values=[2], grid=[0.25])
        p = {"t": 0.25, "n": 2}
        expected = -np.exp(-0.25) * (chebyshev_U(1, 0.25) + chebyshev_U(0, 0.25))
        assert lhs(case, p) == pytest.approx(expected, abs=1e-13)


class TestConventions:
    """Readings that an oracle had to settle, kept as regressions."""

    def test_exponent_sign_is_negative(self):
        assert EXPONENT_SIGN == -1
        p = {"t": 0.25, "n": 2}
        val = lhs(make_case("I3_19", 1.0), p)
        bracket = chebyshev_U(1, 0.25) + chebyshev_U(0, 0.25)
        assert abs(val + np.exp(-0.25) * bracket) < 1e-13
        assert abs(val + np.exp(+0.25) * bracket) > 0.1

    @pytest.mark.parametrize("mu", [1.0, 2.0, 2j])
    def test_rejected_exponent_sign_fails_everywhere(self, mu):
        case = make_case("I3_20", mu, n_values=[2, 3])
        for p in case.params[::3]:
            t = p["t"]
            if abs(t) < 0.1:  # both signs agree at t = 0
                continue
            flipped = complex(case.rhs(p, LD)) * np.exp(2 * mu * t)
            assert abs(lhs(case, p) - flipped) > 1e-3

    def test_one_sided_first_kind_carries_positive_U(self):
        # the exp(-) kernel flips the U term relative to the exp(+) kernel
        mu, p = 1.5, {"t": -0.35, "n": 3}
        plus = lhs(make_case("I3_8", mu), p)
        minus = lhs(make_case("I3_15", mu), p)
        th = np.arccos(p["t"])
        u = np.sin(3 * th - mu * np.sin(th)) / np.sin(th)
        assert abs(plus + u) < 1e-12
        tail = sum(mu**k / math.factorial(k) * chebyshev_U(2 - k, p["t"]) for k in range(3))
        assert abs(minus - (u - 2 * np.exp(-mu * p["t"]) * tail)) < 1e-12
        assert abs(minus - (-u - 2 * np.exp(-mu * p["t"]) * tail)) > 0.1

    @pytest.mark.parametrize("weights", FAMILY_WEIGHTS)
    def test_quadratic_weight_variant_without_beta_cosh_fails(self, weights):
        # the alternative with sinh[mu(u - t)] and a (alpha + beta) sinh term does not hold
        a, b, _ = weights
        mu, p = 1.0, {"t": 0.3, "u": -0.45}
        case = make_case("I2_42", mu, weights=weights)
        t, u = p["t"], p["u"]
        q = a * t * t + b * t + weights[2]
        sp = np.sqrt(1 - t * t)
        alt = (-np.sinh(mu * (u - t)) * np.sin(mu * sp) * q / sp - a * t * np.cosh(mu * u)
               + mu * (a + b) / 2 * np.sinh(mu * u))
        val = lhs(case, p)
        assert abs(val - complex(case.rhs(p, LD))) < 1e-12
        assert abs(val - alt) > 1e-2

    def test_pair48_transform_decays_with_negative_exponent(self):
        from coshfht.quadrature import forward_cosh_fht

        mu, s = 1.0, 0.3
        val = forward_cosh_fht(lambda th: np.sin(2 * th - mu * np.sin(th)), mu, s)
        br = 4 * s * s + 2 * mu * s + 0.5 * mu * mu - 2
        assert abs(val - 0.5 * np.exp(-mu * s) * br) < 1e-13
        assert abs(val - 0.5 * np.exp(mu * s) * br) > 0.1


class TestRunner:
    def test_catalog_composition(self):
        cases = identity_catalog(1.0)
        ids = [c.id for c in cases]
        assert set(LEMMA_IDS + CHEB_IDS) <= set(ids)
        assert ids.count("I2_42") == len(FAMILY_WEIGHTS)
        assert "null" in ids

    def test_unknown_id(self):
        with pytest.raises(KeyError):
            make_case("I9_9", 1.0)

    def test_n_must_be_positive(self):
        with pytest.raises(ValueError):
            make_case("I3_19", 1.0, n_values=[0, 1])

    def test_failures_are_flagged_not_raised(self):
        case = make_case("I2_4", 1.0, grid=[0.1, 0.2])
        broken = dataclasses.replace(case, rhs=lambda p, xp: case.rhs(p, xp) + 1e-6)
        assert check_identity(case).passed
        rep = check_identity(broken)
        assert not rep.passed
        assert rep.points == 4 and set(rep.worst) == {"t", "u"}
        row = rep.as_row()
        assert row["passed"] is False and row["id"] == "I2_4"

    def test_precision_modes_agree(self):
        case = make_case("I2_3", 1 + 1j, grid=[-0.5, 0.6])
        a = check_identity(case, precision="extended")
        b = check_identity(case, precision="mp")
        assert a.backends == ("longdouble",) and b.backends == ("mpmath",)
        assert a.max_residual < 1e-16 and b.max_residual < 1e-25

    @pytest.mark.parametrize("mu", [1.0, 2j, 3 + 3j], ids=str)
    def test_quadratic_family_identity(self, mu):
        for rep in run_catalog(mu, ids=["I2_42"]):
            assert rep.max_residual < 1e-8, rep

    def test_quadratic_family_identity_large_mu(self):
        for rep in run_catalog(4 * np.pi, ids=["I2_42"], grid=identity_grid()[::2]):
            assert rep.max_residual < 1e-8, rep

    def test_full_catalog_at_unit_mu(self):
        reports = run_catalog(1.0)
        assert all(r.passed for r in reports), [r.as_row() for r in reports if not r.passed]
