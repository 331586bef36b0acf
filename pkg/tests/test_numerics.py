import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonmarkov_g2.errors import BracketError, DomainError
from nonmarkov_g2.numerics import (
    Quadrature,
    exponential_integral,
    find_bracketed_root,
    integrate_finite,
    integrate_semiinfinite,
    principal_value_integral,
)

EULER_GAMMA = 0.5772156649015329


def ei_series(x, terms=80):
    """Ei(x) = gamma + ln x + sum x^k / (k k!), x > 0."""
    total, term = 0.0, 1.0
    for k in range(1, terms):
        term *= x / k
        total += term / k
    return EULER_GAMMA + math.log(x) + total


def e1_continued_fraction(x, depth=200):
    """E1(x) by the Lentz-free backward continued fraction, x > 0."""
    f = 0.0
    for k in range(depth, 0, -1):
        f = k / (1 + k / (x + f))
    return math.exp(-x) / (x + f)


class TestQuadratureSettings:
    def test_rejects_nonpositive_tolerance(self):
        with pytest.raises(ValueError):
            Quadrature(relative_tolerance=0)
        with pytest.raises(ValueError):
            Quadrature(absolute_tolerance=-1)

    def test_rejects_zero_subdivisions(self):
        with pytest.raises(ValueError):
            Quadrature(max_subdivisions=0)


class TestIntegrateFinite:
    def test_constant(self):
        res = integrate_finite(lambda x: np.ones_like(x), 0.0, 1.0)
        assert res.converged
        assert abs(res.value - 1.0) < 1e-14

    def test_gamma_two(self):
        res = integrate_finite(lambda x: x * np.exp(-x), 0.0, 50.0)
        assert abs(res.value - 1.0) < 1e-9

    def test_complex_exponential(self):
        res = integrate_finite(lambda x: np.exp(1j * x), 0.0, math.pi)
        assert abs(res.value - 2j) < 1e-12

    def test_error_estimate_bounded_when_converged(self):
        q = Quadrature()
        res = integrate_finite(lambda x: np.sin(30 * x) ** 2, 0.0, 3.0, q)
        assert res.converged
        assert res.error_estimate <= q.target(abs(res.value))

    def test_vector_valued(self):
        ks = np.array([1.0, 2.0, 3.0])
        res = integrate_finite(lambda x: np.cos(np.outer(x, ks)), 0.0, 1.0)
        assert np.allclose(res.value, np.sin(ks) / ks, atol=1e-13)

    def test_flags_nonconvergence(self):
        q = Quadrature(max_subdivisions=2)
        res = integrate_finite(lambda x: np.sin(200 * x) / (x + 1e-3), 0.0, 10.0, q)
        assert not res.converged

    def test_deterministic(self):
        f = lambda x: np.exp(-x) * np.cos(5 * x)
        a = integrate_finite(f, 0.0, 7.0)
        b = integrate_finite(f, 0.0, 7.0)
        assert a.value == b.value


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-3, 3), b=st.floats(-3, 3),
       k1=st.floats(0.1, 5), k2=st.floats(0.1, 5))
def test_linearity(a, b, k1, k2):
    f = lambda x: np.cos(k1 * x) * np.exp(-x)
    g = lambda x: x**2 * np.sin(k2 * x)
    combined = integrate_finite(lambda x: a * f(x) + b * g(x), 0.0, 2.0).value
    separate = a * integrate_finite(f, 0.0, 2.0).value + b * integrate_finite(g, 0.0, 2.0).value
    assert abs(combined - separate) <= 1e-9 * (1 + abs(separate))


@settings(max_examples=30, deadline=None)
@given(m=st.floats(-0.99, 2.99), k=st.floats(0.1, 10))
def test_interval_additivity(m, k):
    f = lambda x: np.exp(-0.3 * x) * np.sin(k * x)
    whole = integrate_finite(f, -1.0, 3.0).value
    parts = integrate_finite(f, -1.0, m).value + integrate_finite(f, m, 3.0).value
    assert abs(whole - parts) <= 1e-9 * (1 + abs(whole))


class TestIntegrateSemiinfinite:
    def test_gamma_two(self):
        res = integrate_semiinfinite(lambda w: w * np.exp(-w), 0.0, 1.0)
        assert abs(res.value - 1.0) < 1e-10

    def test_ohmic_total(self):
        eta, wc = 0.1, 5.0
        res = integrate_semiinfinite(lambda w: eta * w * np.exp(-w / wc), 0.0, wc)
        assert abs(res.value - eta * wc**2) < 1e-10

    def test_ohmic_total_against_direct_sum(self):
        eta, wc = 0.1, 5.0
        dw = 1e-3
        w = (np.arange(400_000) + 0.5) * dw
        direct = np.sum(eta * w * np.exp(-w / wc)) * dw
        res = integrate_semiinfinite(lambda x: eta * x * np.exp(-x / wc), 0.0, wc)
        assert abs(res.value - direct) < 1e-6

    def test_gaussian(self):
        res = integrate_semiinfinite(lambda w: np.exp(-w**2), 0.0, 1.0)
        assert abs(res.value - math.sqrt(math.pi) / 2) < 1e-11


class TestPrincipalValue:
    def test_symmetric_interval(self):
        val = principal_value_integral(lambda w: np.ones_like(w), 1.0, 0.0, 2.0)
        assert abs(val) < 1e-13

    def test_log(self):
        val = principal_value_integral(lambda w: np.ones_like(w), 1.0, 0.0, 3.0)
        assert abs(val - math.log(2)) < 1e-13

    def test_ohmic_shift_closed_form(self):
        wc = 5.0
        val = principal_value_integral(lambda w: w * np.exp(-w / wc), 1.0, 0.0,
                                       math.inf, decay_scale=wc)
        # PV of J/(w' - w) is minus the frequency shift.
        closed = 1.0 * math.exp(-1 / wc) * exponential_integral(1 / wc) - wc
        assert abs(-val.real - closed) < 1e-9

    @pytest.mark.parametrize("pole", [-0.5, 2.5])
    def test_pole_outside_is_ordinary(self, pole):
        f = lambda w: np.cos(w)
        val = principal_value_integral(f, pole, 0.0, 2.0)
        ref = integrate_finite(lambda w: f(w) / (w - pole), 0.0, 2.0).value
        assert abs(val - ref) < 1e-12

    def test_pole_at_endpoint(self):
        with pytest.raises(DomainError):
            principal_value_integral(lambda w: w, 0.0, 0.0, 1.0)

    def test_infinite_needs_decay(self):
        with pytest.raises(DomainError):
            principal_value_integral(lambda w: np.exp(-w), 1.0, 0.0, math.inf)


class TestRoot:
    def test_linear(self):
        assert abs(find_bracketed_root(lambda x: x - 0.5, 0.0, 1.0) - 0.5) < 1e-14

    def test_cosine(self):
        assert abs(find_bracketed_root(math.cos, 0.0, 2.0) - math.pi / 2) < 1e-13

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            find_bracketed_root(lambda x: x * x + 1, -1.0, 1.0)

    @settings(max_examples=40, deadline=None)
    @given(r=st.floats(-9.9, 9.9), tol=st.sampled_from([1e-6, 1e-10, 1e-14]))
    def test_straddles(self, r, tol):
        f = lambda x: math.tanh(x - r) + 0.1 * (x - r) ** 3
        x = find_bracketed_root(f, -10.0, 10.0, tol=tol)
        step = tol + 4 * np.finfo(float).eps * max(1.0, abs(x))
        assert f(x - step) <= 0 <= f(x + step)


class TestExponentialIntegral:
    def test_ei_one(self):
        assert abs(exponential_integral(1.0) - 1.895117816) < 1e-9
        assert abs(exponential_integral(1.0) - ei_series(1.0)) < 1e-13

    def test_minus_e1_one(self):
        assert abs(exponential_integral(-1.0) + 0.219383934) < 1e-9
        assert abs(exponential_integral(-1.0) + e1_continued_fraction(1.0)) < 1e-13

    @pytest.mark.parametrize("x", [0.05, 0.3, 2.0, 7.5, 20.0])
    def test_against_series(self, x):
        assert abs(exponential_integral(x) / ei_series(x) - 1) < 1e-10

    @pytest.mark.parametrize("x", [0.5, 1.0, 3.0, 10.0, 40.0])
    def test_against_continued_fraction(self, x):
        assert abs(exponential_integral(-x) / -e1_continued_fraction(x) - 1) < 1e-10

    def test_small_argument(self):
        x = 1e-6
        assert abs(exponential_integral(x) - (math.log(x) + EULER_GAMMA)) < 2e-6

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 5.0])
    def test_derivative(self, x):
        h = 1e-5 * x
        fd = (exponential_integral(x + h) - exponential_integral(x - h)) / (2 * h)
        assert abs(fd / (math.exp(x) / x) - 1) < 1e-6

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            exponential_integral(0.0)

    def test_array(self):
        out = exponential_integral(np.array([1.0, -1.0]))
        assert out.shape == (2,)
