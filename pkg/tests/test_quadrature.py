import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coshfht.cheb_basis import chebyshev_T, chebyshev_U
from coshfht.errors import ConvergenceError, DomainError
from coshfht.identities import identity_catalog
from coshfht.quadrature import (
    LD,
    MP,
    angular_integral,
    forward_cosh_fht,
    gauss_legendre,
    integrate,
    pv_integral,
)

MU_SET = [0.0, 1.0, 4 * np.pi, 2j, 3 + 3j]


def test_gauss_legendre_rule():
    x, w = gauss_legendre(40)
    assert x.dtype == np.longdouble
    assert abs(np.sum(w) - 2) < 1e-17
    np.testing.assert_allclose(x, -x[::-1], atol=1e-18)
    # exact through degree 2n - 1
    assert abs(np.sum(w * x**78) - 2 / 79) < 1e-17
    with pytest.raises(ValueError):
        gauss_legendre(0)


class TestPV:
    def test_odd_kernel_vanishes(self):
        assert abs(pv_integral(lambda th: np.ones_like(th), 0.0)) < 1e-15

    def test_semicircle(self):
        assert pv_integral(np.sin, 0.5) == pytest.approx(0.5, abs=1e-14)

    def test_first_kind_example(self):
        val = pv_integral(lambda th: np.cos(3 * th) / np.sin(th), 0.2)
        assert val == pytest.approx(0.84, abs=1e-13)

    @pytest.mark.parametrize("n", range(0, 9))
    def test_classical_degeneration(self, n):
        for t in (-0.9, -0.3, 0.15, 0.8):
            if n >= 1:
                val = pv_integral(lambda th: np.cos(n * th) / np.sin(th), t)
                assert abs(val + chebyshev_U(n - 1, t)) < 1e-8
            val = pv_integral(lambda th: np.sin((n + 1) * th), t)
            assert abs(val - chebyshev_T(n + 1, t)) < 1e-8

    @given(n=st.integers(1, 20), t=st.floats(-0.99, 0.99))
    @settings(max_examples=25, deadline=None)
    def test_second_kind_property(self, n, t):
        val = pv_integral(lambda th: np.sin(n * th), t)
        assert abs(val - chebyshev_T(n, t)) < 1e-10

    @pytest.mark.parametrize("t", [1.0, -1.0, 1.5])
    def test_pole_domain(self, t):
        with pytest.raises(DomainError):
            pv_integral(np.sin, t)

    def test_minimum_order(self):
        with pytest.raises(ValueError):
            pv_integral(np.sin, 0.1, quad_order=8)

    def test_convergence_failure_is_reported(self):
        step = lambda th: np.where(th < 1.0, 1.0, 0.0)  # noqa: E731
        with pytest.raises(ConvergenceError):
            pv_integral(step, -0.3, quad_order=64, max_order=1024)

    def test_bad_precision(self):
        with pytest.raises(ValueError):
            pv_integral(np.sin, 0.1, precision="quad")

    def test_mp_backend_agrees(self):
        ld = pv_integral(lambda th: np.sin(3 * th - np.sin(th)), 0.3)
        mp = pv_integral(lambda th, xp: xp.sin(3 * th - xp.sin(th)), 0.3, precision="mp")
        assert abs(ld - mp) < 1e-17


class TestForward:
    def test_pair47(self):
        mu = 2.0
        val = forward_cosh_fht(lambda th: np.sin(mu * np.sin(th)), mu, 0.3)
        assert val == pytest.approx(np.sinh(0.6), abs=1e-14)

    def test_pair45(self):
        val = forward_cosh_fht(lambda th: np.cos(np.sin(th)) * np.sin(th), 1.0, 0.4)
        assert val == pytest.approx(0.4 * np.cosh(0.4) - 0.5 * np.sinh(0.4), abs=1e-14)

    def test_null_function_is_annihilated(self):
        s = np.array([-0.8, -0.1, 0.35, 0.9])
        vals = forward_cosh_fht(lambda th: np.cos(3 * np.sin(th)) / np.sin(th), 3.0, s)
        assert vals.shape == s.shape
        assert np.max(np.abs(vals)) < 1e-12

    def test_scalar_in_scalar_out(self):
        assert np.ndim(forward_cosh_fht(np.sin, 0.0, 0.5)) == 0


class TestAngular:
    def test_normalization(self):
        assert angular_integral(lambda th: np.ones_like(th)) == pytest.approx(1.0, abs=1e-17)

    def test_moment_identity_examples(self):
        u = 0.3
        val0 = angular_integral(lambda th: np.cos(0 * (u - np.cos(th))) * np.cos(0 * np.sin(th)))
        assert val0 == pytest.approx(1.0)
        val = angular_integral(lambda th: np.cosh(2 * (u - np.cos(th))) * np.cos(2 * np.sin(th)))
        assert val == pytest.approx(np.cosh(0.6), abs=1e-14)

    def test_order_validation(self):
        with pytest.raises(ValueError):
            angular_integral(np.sin, quad_order=0)


@pytest.mark.parametrize("mu", MU_SET, ids=str)
def test_doubling_order_is_stable_on_catalog(mu):
    # every catalog integrand, a subsample of its parameter grid
    worst = 0.0
    for case in identity_catalog(mu, n_values=(1, 4, 6)):
        for p in case.params[::6]:
            g = lambda th, xp, p=p, case=case: case.integrand(p, xp)(th)  # noqa: E731
            t = p["t"] if case.kind == "pv" else None
            a, _, _ = integrate(g, t, quad_order=1024, precision="auto")
            b, _, _ = integrate(g, t, quad_order=2048, precision="auto")
            worst = max(worst, float(abs(a - b)))
    assert worst < 1e-9


def test_auto_switches_backend_for_large_integrands():
    g = lambda th, xp: xp.cosh(4 * np.pi * (0.9 - xp.cos(th))) * xp.sin(th)  # noqa: E731
    _, peak, xp = integrate(g, -0.9, precision="auto")
    assert xp is MP and peak > 1e9
    _, _, xp_small = integrate(lambda th, xp: xp.sin(th), 0.2, precision="auto")
    assert xp_small is LD
