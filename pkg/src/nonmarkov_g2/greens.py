"""Retarded and correlation Green's functions of the damped mode.

u(t) is obtained two ways: by stepping the integro-differential equation
on a time grid (:func:`solve_u_ide`) and from its spectral decomposition
into a localized pole plus a continuum (:func:`u_spectral`).  The thermal
correlation v(t, t') is the double time integral of u, the thermal kernel
and u*, evaluated on the same grid (:func:`v_table`).

The memory kernel depends on time differences only, so u(t, s) = u(t - s)
and only the one-argument function is ever stored.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .bath import (
    OMEGA_0,
    BathParams,
    memory_kernel,
    self_energy_shift,
    self_energy_slope,
    spectral_density,
    spectral_times_occupation,
    thermal_kernel_table,
)
from .errors import ConfigurationError, ConsistencyError, ConvergenceError
from .numerics import (
    DEFAULT_QUADRATURE,
    SEMIINFINITE_CUT,
    Quadrature,
    find_bracketed_root,
    integrate_semiinfinite,
)

__all__ = [
    "MAX_DT",
    "TimeGrid",
    "LocalizedMode",
    "UFunction",
    "VTable",
    "solve_u_ide",
    "find_localized_mode",
    "pole_function",
    "continuum_density",
    "continuum_weight",
    "u_spectral",
    "v_table",
    "v_steady",
    "steady_correlation",
]

MAX_DT = 0.05
POLE_TOLERANCE = 1e-10
_BRACKET_LIMIT = -1e4
_T_CHUNK = 128


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_i = i * dt, i = 0 .. n_steps."""

    dt: float
    n_steps: int

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if self.dt > MAX_DT:
            raise ConfigurationError(
                f"dt = {self.dt} exceeds the resolution guard dt <= {MAX_DT}"
            )
        if self.n_steps < 1:
            raise ConfigurationError("a time grid needs at least one step")

    @classmethod
    def covering(cls, t_max: float, dt: float = 0.01) -> "TimeGrid":
        return cls(dt, max(1, int(math.ceil(t_max / dt - 1e-9))))

    @property
    def t_max(self) -> float:
        return self.dt * self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt

    def index(self, t: float) -> int:
        """Grid index of time ``t``; it must be an integer multiple of dt."""
        k = int(round(t / self.dt))
        if abs(k * self.dt - t) > 1e-9 * max(1.0, abs(t)) or k < 0:
            raise ConfigurationError(f"t = {t} is not on the grid (dt = {self.dt})")
        if k > self.n_steps:
            raise ConfigurationError(f"t = {t} lies beyond t_max = {self.t_max}")
        return k


@dataclass(frozen=True)
class LocalizedMode:
    """Dissipationless bound state below the bath continuum."""

    omega_b: float
    residue: float


@dataclass(frozen=True)
class UFunction:
    grid: TimeGrid
    values: np.ndarray = field(repr=False)
    mode: Optional[LocalizedMode] = None

    def __post_init__(self):
        if self.values.shape != (self.grid.n_steps + 1,):
            raise ConfigurationError("u values do not match the grid")
        if self.values[0] != 1:
            raise ConsistencyError("u(0) must equal 1")
        peak = float(np.max(np.abs(self.values)))
        if peak > 1 + 1e-6:
            raise ConsistencyError(f"|u| reached {peak:.9f} > 1")
        self.values.setflags(write=False)

    def at(self, t: float) -> complex:
        return complex(self.values[self.grid.index(t)])


def pole_function(omega, params: BathParams):
    """w - w0 - shift(w); its zero below the continuum is the bound state."""
    return omega - OMEGA_0 - self_energy_shift(omega, params)


def find_localized_mode(params: BathParams,
                        q: Quadrature = DEFAULT_QUADRATURE
                        ) -> Optional[LocalizedMode]:
    """Bound-state frequency and residue, or None at or below eta_c."""
    if not params.strong:
        return None

    def f(w):
        return pole_function(w, params)

    hi = -1e-12
    lo = -params.omega_c
    while f(lo) >= 0:
        lo *= 2.0
        if lo < _BRACKET_LIMIT:
            raise ConvergenceError("could not bracket the localized-mode pole")
    omega_b = find_bracketed_root(f, lo, hi, tol=1e-15)
    residual = abs(f(omega_b))
    if residual >= POLE_TOLERANCE:
        raise ConvergenceError(f"pole residual {residual:.2e} above tolerance")
    slope = self_energy_slope(omega_b, params, q, method="closed")
    return LocalizedMode(omega_b, 1.0 / (1.0 - slope))


def continuum_density(omega, params: BathParams):
    """Continuum spectral weight J / [(w - w0 - shift)^2 + pi^2 J^2], w > 0."""
    w = np.asarray(omega, dtype=float)
    J = spectral_density(w, params)
    pos = w > 0
    out = np.zeros(w.shape)
    if np.any(pos):
        wp = w[pos] if w.ndim else w
        Jp = J[pos] if w.ndim else J
        detune = wp - OMEGA_0 - self_energy_shift(wp, params)
        val = Jp / (detune**2 + (math.pi * Jp) ** 2)
        if w.ndim:
            out[pos] = val
        else:
            out = np.asarray(val)
    return float(out) if out.ndim == 0 else out


def _continuum_breakpoints(params: BathParams) -> list:
    """Panel hints around the quasi-particle peak of the continuum."""
    def f(w):
        return pole_function(w, params)

    lo, hi = 1e-9, OMEGA_0 + 1.0
    points = [OMEGA_0]
    if f(lo) < 0 < f(hi):
        peak = find_bracketed_root(f, lo, hi, tol=1e-12)
        width = max(math.pi * spectral_density(peak, params), 1e-6)
        for k in (0.5, 1, 2, 5, 20):
            points.extend([peak - k * width, peak + k * width])
        points.append(peak)
    return [p for p in points if p > 0]


def continuum_weight(params: BathParams, q: Quadrature = DEFAULT_QUADRATURE) -> float:
    """Integral of the continuum density over (0, inf)."""
    res = integrate_semiinfinite(lambda w: continuum_density(w, params), 0.0,
                                 params.omega_c, q,
                                 points=_continuum_breakpoints(params))
    if not res.converged:
        raise ConvergenceError("continuum weight quadrature did not converge")
    return float(res.value.real)


def _fourier_budget(q: Quadrature, t_max: float, params: BathParams) -> Quadrature:
    """Raise the panel budget so that e^{-i w t} is resolved up to the cut."""
    periods = t_max * 2 * SEMIINFINITE_CUT * params.omega_c / (2 * math.pi)
    need = int(8 * periods) + 1
    if need <= q.max_subdivisions:
        return q
    return Quadrature(q.relative_tolerance, q.absolute_tolerance, need)


def u_spectral(t, params: BathParams, q: Quadrature = DEFAULT_QUADRATURE,
               mode: Optional[LocalizedMode] = None):
    """u(t) from the localized pole plus the continuum Fourier integral.

    ``t`` may be an array; times are processed in blocks as one
    vector-valued quadrature each.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0):
        raise ValueError("u_spectral needs t >= 0")
    if mode is None:
        mode = find_localized_mode(params, q)
    points = _continuum_breakpoints(params)
    out = np.empty(t_arr.shape, dtype=complex)
    for start in range(0, t_arr.size, _T_CHUNK):
        block = t_arr[start:start + _T_CHUNK]

        def integrand(w, block=block):
            dens = continuum_density(w, params)
            return dens[:, None] * np.exp(-1j * np.outer(w, block))

        qb = _fourier_budget(q, float(np.max(block)), params)
        res = integrate_semiinfinite(integrand, 0.0, params.omega_c, qb, points=points)
        if not res.converged:
            raise ConvergenceError(
                f"u_spectral quadrature did not converge (err {res.error_estimate:.2e})"
            )
        out[start:start + _T_CHUNK] = res.value
    if mode is not None:
        out += mode.residue * np.exp(-1j * mode.omega_b * t_arr)
    if np.ndim(t) == 0:
        return complex(out[0])
    return out


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def history_weights(grid: TimeGrid, params: BathParams):
    """Product-trapezoid weights for the memory integral.

    With u linear between grid points, the integral of k(t_n - s) u(s)
    becomes w[0] u_n + sum_j w[n-j] u_j + e[n] u_0, where the weights are
    the exact first moments of the kernel on each step (8-point
    Gauss-Legendre per step, far below the step error).
    """
    dt = grid.dt
    m = np.arange(1, grid.n_steps + 1)
    lo = (m - 1) * dt
    x = lo[:, None] + 0.5 * dt * (1.0 + _GL_NODES[None, :])
    k = memory_kernel(x, params)
    frac = (x - lo[:, None]) / dt
    # rising[m]: weight of u at the far end of step m, falling[m]: near end.
    rising = 0.5 * dt * (k * frac) @ _GL_WEIGHTS
    falling = 0.5 * dt * (k * (1.0 - frac)) @ _GL_WEIGHTS
    weights = np.zeros(grid.n_steps + 1, dtype=complex)
    weights[0] = falling[0]
    weights[1:-1] = rising[:-1] + falling[1:]
    weights[-1] = rising[-1]
    end = np.zeros(grid.n_steps + 1, dtype=complex)
    end[1:] = rising
    return weights, end


def solve_u_ide(grid: TimeGrid, params: BathParams,
                q: Quadrature = DEFAULT_QUADRATURE) -> UFunction:
    """Step the integro-differential equation for u on ``grid``.

    Second order in dt: piecewise-linear (product trapezoid) memory
    integral and an implicit trapezoidal step whose linear corrector
    equation is solved exactly.
    """
    weights, end = history_weights(grid, params)
    values = kernels.solve_volterra(weights, end, OMEGA_0, grid.dt)
    return UFunction(grid, values, find_localized_mode(params, q))


class VTable:
    """Thermal two-time correlation v(t_i, t_j) on a grid, built on demand.

    The diagonal is computed at construction.  Rows v(t_i, t_j), j <= j_max,
    are computed when first requested and cached; v(t_j, t_i) follows by
    Hermiticity.  :attr:`values` assembles the full matrix.
    """

    def __init__(self, grid: TimeGrid, params: BathParams, u: UFunction,
                 threads: int = 1):
        if u.grid != grid:
            raise ConfigurationError("u was computed on a different grid")
        self.grid = grid
        self.params = params
        self.temp = params.temp
        self.u = u
        self.threads = max(1, int(threads))
        self._gt = thermal_kernel_table(grid.times, params)
        self._rows = {}
        self.diagonal = kernels.v_diagonal(u.values, self._gt, grid.dt)
        self.diagonal.setflags(write=False)

    @property
    def n(self) -> int:
        return self.grid.n_steps + 1

    def row(self, i: int, j_max: Optional[int] = None) -> np.ndarray:
        """v(t_i, t_j) for j = 0 .. j_max (default: the whole grid)."""
        if j_max is None:
            j_max = self.n - 1
        if not (0 <= i < self.n and 0 <= j_max < self.n):
            raise ConfigurationError("row index outside the grid")
        cached = self._rows.get(i)
        if cached is None or cached.size <= j_max:
            cached = kernels.v_row(self.u.values, self._gt, i, j_max, self.grid.dt)
            cached[i:i + 1] = self.diagonal[i] if i <= j_max else cached[i:i + 1]
            cached.setflags(write=False)
            self._rows[i] = cached
        return cached[: j_max + 1]

    def prefetch(self, indices: Iterable[int], j_max: Optional[int] = None) -> None:
        """Compute several rows, in parallel when ``threads`` > 1."""
        todo = sorted(set(int(i) for i in indices))
        if self.threads == 1 or len(todo) < 2:
            for i in todo:
                self.row(i, j_max)
            return
        jm = self.n - 1 if j_max is None else j_max
        with ThreadPoolExecutor(self.threads) as pool:
            results = list(pool.map(
                lambda i: kernels.v_row(self.u.values, self._gt, i, jm, self.grid.dt),
                todo))
        for i, r in zip(todo, results):
            if i <= jm:
                r[i] = self.diagonal[i]
            r.setflags(write=False)
            self._rows[i] = r

    def __call__(self, i: int, j: int) -> complex:
        if i == j:
            return complex(self.diagonal[i])
        if i in self._rows and self._rows[i].size > j:
            return complex(self._rows[i][j])
        if j in self._rows and self._rows[j].size > i:
            return complex(np.conj(self._rows[j][i]))
        return complex(self.row(i, max(i, j))[j])

    @property
    def values(self) -> np.ndarray:
        """Full Hermitian matrix; O(N^3) work, meant for small grids."""
        n = self.n
        self.prefetch(range(n))
        full = np.empty((n, n), dtype=complex)
        for i in range(n):
            r = self._rows[i]
            full[i, i:] = r[i:]
            full[i:, i] = np.conj(r[i:])
        full[np.diag_indices(n)] = self.diagonal
        return full


def v_table(grid: TimeGrid, params: BathParams, u: UFunction,
            threads: int = 1) -> VTable:
    return VTable(grid, params, u, threads=threads)


def _thermal_continuum(w, params: BathParams):
    """D_c(w) n(w, T), finite as w -> 0."""
    w = np.asarray(w, dtype=float)
    J = spectral_density(w, params)
    detune = w - OMEGA_0 - self_energy_shift(w, params)
    return spectral_times_occupation(w, params) / (detune**2 + (math.pi * J) ** 2)


def _thermal_localized(w, params: BathParams, mode: LocalizedMode):
    """J(w) Z^2 / (w - w_b)^2 n(w, T)."""
    w = np.asarray(w, dtype=float)
    return (spectral_times_occupation(w, params) * mode.residue**2
            / (w - mode.omega_b) ** 2)


def v_steady(params: BathParams, q: Quadrature = DEFAULT_QUADRATURE,
             mode: Optional[LocalizedMode] = None) -> float:
    """Long-time equal-time correlation from the spectral weights."""
    return float(steady_correlation(0.0, params, q, mode).real)


def steady_correlation(tau, params: BathParams,
                       q: Quadrature = DEFAULT_QUADRATURE,
                       mode: Optional[LocalizedMode] = None):
    """Long-time limit of v(t, t + tau) as t -> infinity.

    The continuum contributes the Fourier transform of D_c(w) n(w); the
    localized mode contributes its weight J Z^2 / (w - w_b)^2 n(w) rotating
    at w_b.  Terms that oscillate in t vanish in the limit.
    """
    tau_arr = np.atleast_1d(np.asarray(tau, dtype=float))
    if params.temp == 0:
        out = np.zeros(tau_arr.shape, dtype=complex)
        return complex(out[0]) if np.ndim(tau) == 0 else out
    if mode is None and params.strong:
        mode = find_localized_mode(params, q)
    points = _continuum_breakpoints(params)
    out = np.empty(tau_arr.shape, dtype=complex)
    for start in range(0, tau_arr.size, _T_CHUNK):
        block = tau_arr[start:start + _T_CHUNK]

        def integrand(w, block=block):
            dens = _thermal_continuum(w, params)
            return dens[:, None] * np.exp(1j * np.outer(w, block))

        qb = _fourier_budget(q, float(np.max(np.abs(block))), params)
        res = integrate_semiinfinite(integrand, 0.0, params.omega_c, qb, points=points)
        if not res.converged:
            raise ConvergenceError("steady correlation quadrature did not converge")
        out[start:start + _T_CHUNK] = res.value
    if mode is not None:
        res = integrate_semiinfinite(
            lambda w: _thermal_localized(w, params, mode),
            0.0, params.omega_c, q)
        if not res.converged:
            raise ConvergenceError("localized weight quadrature did not converge")
        out += res.value.real * np.exp(1j * mode.omega_b * tau_arr)
    if np.ndim(tau) == 0:
        return complex(out[0])
    return out
