"""Independent reference solutions from a finite, discretized bath.

:class:`DiscretizedBath` replaces the continuum by ``n_modes`` oscillators
on a midpoint frequency grid and propagates the single-particle
Hamiltonian exactly by diagonalization; u and v then follow from the
propagator without any integro-differential equation or double time
integral.

:func:`fock_fourth_order` goes one level deeper and evaluates the two-time
photon correlator for a few modes by brute-force evolution in truncated
Fock space, which checks the Gaussian factorization behind the
closed-form correlator.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bath import OMEGA_0, BathParams, bose_occupation, spectral_density
from .errors import ConfigurationError

__all__ = ["DiscretizedBath", "MAX_ORACLE_DIMENSION", "single_particle_propagator",
           "fock_fourth_order"]

MAX_ORACLE_DIMENSION = 10_000


@dataclass
class DiscretizedBath:
    """Mode coupled to ``n_modes`` bath oscillators, uniform on (0, omega_max]."""

    params: BathParams
    n_modes: int = 2000
    omega_max_factor: float = 20.0
    freqs: np.ndarray = field(init=False, repr=False)
    couplings: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_modes + 1 > MAX_ORACLE_DIMENSION:
            raise ConfigurationError(
                f"oracle dimension {self.n_modes + 1} exceeds {MAX_ORACLE_DIMENSION}"
            )
        if self.n_modes < 1:
            raise ConfigurationError("the oracle needs at least one bath mode")
        omega_max = self.omega_max_factor * self.params.omega_c
        dw = omega_max / self.n_modes
        self.freqs = (np.arange(self.n_modes) + 0.5) * dw
        self.couplings = np.sqrt(spectral_density(self.freqs, self.params) * dw)
        h = np.diag(np.concatenate([[OMEGA_0], self.freqs]))
        h[0, 1:] = self.couplings
        h[1:, 0] = self.couplings
        self._energies, self._vectors = np.linalg.eigh(h)
        if self.params.temp > 0:
            self.occupations = bose_occupation(self.freqs, self.params.temp)
        else:
            self.occupations = np.zeros(self.n_modes)

    @property
    def recurrence_time(self) -> float:
        return 2 * math.pi / (self.freqs[1] - self.freqs[0]) if self.n_modes > 1 else math.inf

    def propagator_row(self, times) -> np.ndarray:
        """S_0k(t) = [exp(-i h t)]_0k, shape (len(times), n_modes + 1)."""
        times = np.atleast_1d(np.asarray(times, dtype=float))
        phase = np.exp(-1j * np.outer(times, self._energies))
        return (phase * self._vectors[0][None, :]) @ self._vectors.T

    def u(self, times) -> np.ndarray:
        return self.propagator_row(times)[:, 0]

    def v(self, times, times2=None) -> np.ndarray:
        """v(t, t') = sum_k n_k S_0k(t) conj(S_0k(t')) as a matrix."""
        s1 = self.propagator_row(times)[:, 1:]
        s2 = s1 if times2 is None else self.propagator_row(times2)[:, 1:]
        return (s1 * self.occupations[None, :]) @ np.conj(s2).T

    def v_diagonal(self, times) -> np.ndarray:
        s = self.propagator_row(times)[:, 1:]
        return np.real(np.sum(np.abs(s) ** 2 * self.occupations[None, :], axis=1))


def single_particle_propagator(omega0: float, freqs: Sequence[float],
                               couplings: Sequence[float], t: float) -> np.ndarray:
    """exp(-i h t) for the one-excitation Hamiltonian of a small mode set."""
    freqs = np.asarray(freqs, dtype=float)
    h = np.diag(np.concatenate([[omega0], freqs]))
    h[0, 1:] = couplings
    h[1:, 0] = couplings
    e, vec = np.linalg.eigh(h)
    return (vec * np.exp(-1j * e * t)) @ vec.T


class _Sector:
    """Fixed total particle number subspace of a few coupled modes."""

    def __init__(self, n_total: int, n_modes: int, h1: np.ndarray):
        self.states = [
            occ for occ in itertools.product(range(n_total + 1), repeat=n_modes)
            if sum(occ) == n_total
        ]
        self.index = {occ: i for i, occ in enumerate(self.states)}
        dim = len(self.states)
        ham = np.zeros((dim, dim))
        for col, occ in enumerate(self.states):
            for p in range(n_modes):
                if occ[p]:
                    ham[col, col] += h1[p, p] * occ[p]
                for q in range(n_modes):
                    if p == q or occ[q] == 0 or h1[p, q] == 0:
                        continue
                    # b_p^dagger b_q
                    new = list(occ)
                    new[q] -= 1
                    new[p] += 1
                    amp = math.sqrt(occ[q] * (occ[p] + 1))
                    ham[self.index[tuple(new)], col] += h1[p, q] * amp
        self.energies, self.vectors = np.linalg.eigh(ham)

    def evolve(self, psi: np.ndarray, t: float) -> np.ndarray:
        """Propagate a state, or a column stack of states, by time t."""
        phase = np.exp(-1j * self.energies * t)
        if psi.ndim == 2:
            phase = phase[:, None]
        return self.vectors @ (phase * (self.vectors.T @ psi))

    def lowering_map(self, dst: "_Sector"):
        """Index arrays and amplitudes for the system lowering operator."""
        src_idx, dst_idx, amp = [], [], []
        for i, occ in enumerate(self.states):
            if occ[0]:
                src_idx.append(i)
                dst_idx.append(dst.index[(occ[0] - 1,) + occ[1:]])
                amp.append(math.sqrt(occ[0]))
        return np.array(src_idx, dtype=int), np.array(dst_idx, dtype=int), np.array(amp)


@functools.lru_cache(maxsize=64)
def _cached_sector(n_total: int, n_modes: int, h1_bytes: bytes) -> _Sector:
    h1 = np.frombuffer(h1_bytes, dtype=float).reshape(n_modes, n_modes)
    return _Sector(n_total, n_modes, h1)


def _annihilate_system(psi: np.ndarray, src: _Sector, dst: _Sector) -> np.ndarray:
    src_idx, dst_idx, amp = src.lowering_map(dst)
    out = np.zeros((len(dst.states),) + psi.shape[1:], dtype=complex)
    scale = amp if psi.ndim == 1 else amp[:, None]
    out[dst_idx] = scale * psi[src_idx]
    return out


def fock_fourth_order(n0: int, omega0: float, freqs: Sequence[float],
                      couplings: Sequence[float], occupations: Sequence[float],
                      t: float, t2: float, weight_cutoff: float = 1e-15):
    """Brute-force <a+(t) a+(t2) a(t2) a(t)>, <a+a>(t) and <a+a>(t2).

    The system starts in |n0>, each bath mode in a thermal state with the
    given mean occupation.  The thermal mixture is sampled configuration by
    configuration (Fock products), dropping configurations whose weight is
    below ``weight_cutoff``; each evolves within its particle-number sector.
    """
    freqs = np.asarray(freqs, dtype=float)
    k = freqs.size
    h1 = np.diag(np.concatenate([[omega0], freqs]))
    h1[0, 1:] = couplings
    h1[1:, 0] = couplings
    ratios = [nb / (1 + nb) for nb in occupations]
    max_m = []
    for x in ratios:
        m = 0
        if x > 0:
            while (1 - x) * x ** m > weight_cutoff:
                m += 1
        max_m.append(m)
    key = np.ascontiguousarray(h1).tobytes()

    def sector(n):
        # Diagonalized sectors are reused across calls with the same modes.
        return _cached_sector(n, k + 1, key)

    # Group the thermal configurations by total particle number so each
    # sector propagates all of its initial states in one matrix product.
    groups = {}
    for config in itertools.product(*(range(m + 1) for m in max_m)):
        w = 1.0
        for x, m in zip(ratios, config):
            w *= (1 - x) * x ** m
        if w < weight_cutoff:
            continue
        groups.setdefault(n0 + sum(config), []).append(((n0,) + tuple(config), w))

    num = mean1 = mean2 = 0.0
    for n_tot, members in sorted(groups.items()):
        if n_tot == 0:
            continue
        sec = sector(n_tot)
        cols = np.array([sec.index[occ] for occ, _ in members])
        weights = np.array([w for _, w in members])
        start = sec.vectors.T[:, cols]

        def at(time):
            return sec.vectors @ (np.exp(-1j * sec.energies * time)[:, None] * start)

        lower = sector(n_tot - 1)
        a_psi = _annihilate_system(at(t), sec, lower)
        mean1 += float(weights @ np.sum(np.abs(a_psi) ** 2, axis=0))
        a_psi2 = _annihilate_system(at(t2), sec, lower)
        mean2 += float(weights @ np.sum(np.abs(a_psi2) ** 2, axis=0))
        if n_tot >= 2:
            moved = lower.evolve(a_psi, t2 - t)
            aa = _annihilate_system(moved, lower, sector(n_tot - 2))
            num += float(weights @ np.sum(np.abs(aa) ** 2, axis=0))
    return num, mean1, mean2
