import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonmarkov_g2.bath import (
    BathParams,
    bose_occupation,
    critical_coupling,
    memory_kernel,
    self_energy_shift,
    self_energy_slope,
    spectral_density,
    spectral_times_occupation,
    thermal_kernel,
    thermal_kernel_table,
    trigamma,
)
from nonmarkov_g2.errors import DomainError
from nonmarkov_g2.numerics import integrate_semiinfinite


class TestParams:
    @pytest.mark.parametrize("args", [(0.0, 5, 2), (-1, 5, 2), (0.1, 0, 2), (0.1, 5, -1)])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            BathParams(*args)

    def test_from_ratio(self):
        p = BathParams.from_ratio(1.5)
        assert p.eta == pytest.approx(0.3)
        assert p.strong

    def test_boundary_is_not_strong(self):
        assert not BathParams.from_ratio(1.0).strong

    def test_with_temp(self):
        p = BathParams(0.1, 5, 2).with_temp(7)
        assert (p.eta, p.omega_c, p.temp) == (0.1, 5, 7)


class TestSpectralDensity:
    def test_zero_at_origin_and_below(self):
        p = BathParams(0.1, 5, 2)
        assert spectral_density(0.0, p) == 0.0
        assert np.all(spectral_density(np.array([-3.0, -1e-9]), p) == 0.0)

    def test_at_cutoff(self):
        p = BathParams(0.1, 5, 2)
        assert spectral_density(5.0, p) == pytest.approx(0.1 * 5 * math.exp(-1), rel=1e-15)

    def test_argmax(self):
        p = BathParams(0.1, 5, 2)
        w = np.linspace(0.001, 30, 30000)
        assert abs(w[np.argmax(spectral_density(w, p))] - 5.0) < 2e-3

    @settings(max_examples=50, deadline=None)
    @given(w=st.floats(-100, 100))
    def test_nonnegative(self, w):
        assert spectral_density(w, BathParams(0.3, 5, 2)) >= 0


@pytest.mark.parametrize("wc,expected", [(5, 0.2), (1, 1.0), (10, 0.1)])
def test_critical_coupling(wc, expected):
    assert critical_coupling(BathParams(0.1, wc, 2)) == pytest.approx(expected, rel=1e-15)


class TestMemoryKernel:
    p = BathParams(0.1, 5, 2)

    def test_origin(self):
        assert memory_kernel(0.0, self.p) == pytest.approx(0.1 * 25)

    def test_conjugate(self):
        assert memory_kernel(-0.7, self.p) == np.conj(memory_kernel(0.7, self.p))

    def test_modulus_decays(self):
        for t in (1.0, 10.0, 100.0):
            expected = 0.1 * 25 / (1 + 25 * t * t)
            assert abs(memory_kernel(t, self.p)) == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("dt", [0.0, 0.3, 1.0, 5.0])
    def test_matches_quadrature(self, dt):
        res = integrate_semiinfinite(
            lambda w: spectral_density(w, self.p) * np.exp(-1j * w * dt), 0.0, 5.0)
        assert abs(res.value - memory_kernel(dt, self.p)) < 1e-8


class TestBose:
    def test_zero_temperature(self):
        assert bose_occupation(0.3, 0.0) == 0.0

    def test_reference_value(self):
        assert bose_occupation(1.0, 2.0) == pytest.approx(1 / (math.exp(0.5) - 1), rel=1e-15)
        assert bose_occupation(1.0, 2.0) == pytest.approx(1.541494, abs=1e-6)

    def test_high_temperature(self):
        assert abs(bose_occupation(1.0, 100.0) - 99.5) < 0.01

    def test_domain(self):
        with pytest.raises(DomainError):
            bose_occupation(0.0, 2.0)

    def test_monotone(self):
        w = np.linspace(0.1, 10, 50)
        assert np.all(np.diff(bose_occupation(w, 2.0)) < 0)
        temps = [0.5, 1, 2, 5, 10]
        vals = [bose_occupation(1.3, t) for t in temps]
        assert np.all(np.diff(vals) > 0)


class TestThermalKernel:
    p = BathParams(0.1, 5, 2)

    def test_zero_temperature(self):
        cold = self.p.with_temp(0)
        assert thermal_kernel(1.3, cold) == 0
        assert np.all(thermal_kernel_table(np.linspace(-2, 2, 9), cold) == 0)

    def test_small_frequency_limit(self):
        assert spectral_times_occupation(1e-9, self.p) == pytest.approx(0.1 * 2)
        near = spectral_times_occupation(1e-6, self.p)
        assert near == pytest.approx(0.2, rel=1e-5)

    def test_hermitian(self):
        for t in (0.1, 1.0, 4.0):
            assert thermal_kernel(-t, self.p) == np.conj(thermal_kernel(t, self.p))
        lags = np.array([-3.0, -0.5, 0.5, 3.0])
        tab = thermal_kernel_table(lags, self.p)
        assert tab[0] == np.conj(tab[3]) and tab[1] == np.conj(tab[2])

    def test_origin_against_riemann_sum(self):
        dw = 200.0 / 100_000
        w = (np.arange(100_000) + 0.5) * dw
        direct = np.sum(spectral_times_occupation(w, self.p)) * dw
        assert abs(thermal_kernel(0.0, self.p).real / direct - 1) < 1e-5

    @pytest.mark.parametrize("t", [0.0, 0.05, 0.7, 3.0, 12.0, 30.0])
    @pytest.mark.parametrize("temp", [0.5, 2.0, 100.0])
    def test_table_matches_quadrature(self, t, temp):
        p = self.p.with_temp(temp)
        quad = thermal_kernel(t, p)
        table = thermal_kernel_table(np.array([t]), p)[0]
        assert abs(quad - table) <= 1e-9 * max(1.0, abs(quad))

    def test_trigamma_reference_values(self):
        assert trigamma(1.0).real == pytest.approx(math.pi**2 / 6, rel=1e-14)
        assert trigamma(0.5).real == pytest.approx(math.pi**2 / 2, rel=1e-14)

    def test_trigamma_domain(self):
        with pytest.raises(DomainError):
            trigamma(-0.5 + 1j)


class TestShift:
    def test_origin(self):
        p = BathParams(0.1, 5, 2)
        assert self_energy_shift(0.0, p) == pytest.approx(-0.5, rel=1e-15)
        assert self_energy_shift(0.0, p, method="quadrature") == pytest.approx(-0.5, rel=1e-9)

    def test_vanishes_far_below(self):
        # Leading decay is -eta wc^2 / |w|, i.e. eta wc 1e-2 at w = -100 wc.
        p = BathParams(0.1, 5, 2)
        w = -100 * 5.0
        bound = 0.1 * 25 / abs(w)
        assert abs(self_energy_shift(w, p)) < bound
        assert abs(self_energy_shift(w, p, method="quadrature")) < bound
        assert abs(self_energy_shift(w, p)) > 0.9 * bound

    def test_closed_form_at_two(self):
        p = BathParams(0.3, 5, 2)
        a = self_energy_shift(2.0, p, method="quadrature")
        b = self_energy_shift(2.0, p)
        assert abs(a - b) < 1e-8

    @pytest.mark.parametrize("w", [0.1, 0.5, 1.0, 2.5, 5.0, 10.0, -0.3, -4.0])
    def test_routes_agree(self, w):
        p = BathParams(0.3, 5, 2)
        a = self_energy_shift(w, p, method="quadrature")
        b = self_energy_shift(w, p)
        assert abs(a - b) <= 1e-8 * abs(b)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            self_energy_shift(1.0, BathParams(0.1, 5, 2), method="bogus")


class TestSlope:
    p = BathParams(0.3, 5, 2)

    @pytest.mark.parametrize("w", [-0.01, -0.3, -1.0, -20.0])
    def test_negative_and_residue_in_unit_interval(self, w):
        s = self_energy_slope(w, self.p)
        assert s < 0
        assert 0 < 1 / (1 - s) < 1

    def test_finite_difference(self):
        h = 1e-4
        fd = (self_energy_shift(-1 + h, self.p) - self_energy_shift(-1 - h, self.p)) / (2 * h)
        assert abs(self_energy_slope(-1.0, self.p) / fd - 1) < 1e-6

    @pytest.mark.parametrize("w", [-0.05, -0.287, -3.0])
    def test_closed_matches_quadrature(self, w):
        a = self_energy_slope(w, self.p)
        b = self_energy_slope(w, self.p, method="closed")
        assert abs(a / b - 1) < 1e-9

    def test_domain(self):
        with pytest.raises(DomainError):
            self_energy_slope(0.0, self.p)
