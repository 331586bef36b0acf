import numpy as np
import pytest

from nonmarkov_g2.errors import ConfigurationError
from nonmarkov_g2.greens import find_localized_mode
from nonmarkov_g2.oracle import DiscretizedBath, single_particle_propagator

TIMES = np.arange(0, 3001) * 0.01


@pytest.fixture(scope="module")
def weak_oracle(weak):
    return DiscretizedBath(weak)


@pytest.fixture(scope="module")
def strong_oracle(strong):
    return DiscretizedBath(strong)


class TestConstruction:
    def test_dimension_guard(self, weak):
        with pytest.raises(ConfigurationError):
            DiscretizedBath(weak, n_modes=10_000)

    def test_needs_modes(self, weak):
        with pytest.raises(ConfigurationError):
            DiscretizedBath(weak, n_modes=0)

    def test_grid_and_couplings(self, weak_oracle, weak):
        dw = 100.0 / 2000
        assert weak_oracle.freqs[0] == pytest.approx(dw / 2)
        assert weak_oracle.freqs[-1] == pytest.approx(100.0 - dw / 2)
        total = np.sum(weak_oracle.couplings**2)
        assert total == pytest.approx(weak.eta * weak.omega_c**2, rel=1e-3)

    def test_zero_temperature_has_no_noise(self, weak):
        cold = DiscretizedBath(weak.with_temp(0.0), n_modes=200)
        assert np.all(cold.v_diagonal([0.0, 1.0, 5.0]) == 0)


class TestPropagator:
    def test_unitary(self):
        s = single_particle_propagator(1.0, [2.0, 3.5], [0.3, 0.4], 2.7)
        assert np.allclose(s @ s.conj().T, np.eye(3), atol=1e-13)

    def test_decoupled(self):
        s = single_particle_propagator(1.0, [2.0], [0.0], 1.3)
        assert s[0, 0] == pytest.approx(np.exp(-1.3j), abs=1e-15)

    def test_starts_at_identity(self, weak_oracle):
        assert weak_oracle.u([0.0])[0] == pytest.approx(1.0, abs=1e-12)
        assert weak_oracle.v_diagonal([0.0])[0] == pytest.approx(0.0, abs=1e-12)

    def test_v_hermitian(self, weak_oracle):
        t = np.array([0.5, 2.0, 7.0])
        m = weak_oracle.v(t)
        assert np.allclose(m, m.conj().T, atol=1e-13)
        assert np.allclose(np.diag(m).real, weak_oracle.v_diagonal(t), atol=1e-13)


class TestAgreement:
    def test_weak(self, weak_oracle, weak_tables):
        u, v = weak_tables
        n = TIMES.size
        assert np.max(np.abs(weak_oracle.u(TIMES) - u.values[:n])) < 1e-3
        assert np.max(np.abs(weak_oracle.v_diagonal(TIMES) - v.diagonal[:n])) < 5e-3
        row = weak_oracle.v([15.0], TIMES)[0]
        assert np.max(np.abs(row - v.row(1500, n - 1)[:n])) < 5e-3

    def test_strong_plateau(self, strong_oracle, strong):
        mode = find_localized_mode(strong)
        tail = np.abs(strong_oracle.u(TIMES[TIMES >= 20]))
        assert abs(np.mean(tail) / mode.residue - 1) < 0.02

    def test_refining_the_bath_converges(self, strong, strong_tables):
        u, v = strong_tables
        idx = np.arange(0, TIMES.size, 10)
        devs = []
        for modes in (1000, 2000, 4000):
            o = DiscretizedBath(strong, n_modes=modes)
            devs.append((np.max(np.abs(o.u(TIMES[idx]) - u.values[idx])),
                         np.max(np.abs(o.v_diagonal(TIMES[idx]) - v.diagonal[idx]))))
        for coarse, fine in zip(devs, devs[1:]):
            # Midpoint discretization error falls as 1 / n_modes^2.
            assert fine[0] < coarse[0] / 3
            assert fine[1] < coarse[1] / 3
