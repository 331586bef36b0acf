"""Photon-number observables built from the Green's functions u and v.

The mode starts in a Fock state |n0>, so only the factorial moments
alpha = <a+ a+ a a>(0) = n0 (n0 - 1) and beta = <a+ a>(0) = n0 enter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gammaln, logsumexp

from .bath import BathParams, bose_occupation, spectral_density
from .errors import ConsistencyError, ConvergenceError, DomainError
from .greens import (
    LocalizedMode,
    TimeGrid,
    UFunction,
    VTable,
    find_localized_mode,
    solve_u_ide,
    steady_correlation,
    v_table,
)
from .numerics import DEFAULT_QUADRATURE, Quadrature

__all__ = [
    "InitialFock",
    "CorrelationPoint",
    "MarkovParams",
    "fourth_order",
    "mean_photon",
    "two_time_fourth_order",
    "g2",
    "g2_curve",
    "markov_fourth_order",
    "markov_mean_photon",
    "markov_g2",
    "markov_g2_ss",
    "thermal_pn",
    "steady_state_pn",
    "steady_distribution",
    "distribution_g2",
    "g2_steady",
    "g2_steady_spectral",
    "SteadyG2",
]

NEGATIVE_TOLERANCE = 1e-9
STEADY_TOLERANCE = 1e-3
STEADY_T_START = 25.0
STEADY_T_LIMIT = 200.0


@dataclass(frozen=True)
class InitialFock:
    n0: int

    def __post_init__(self):
        if int(self.n0) != self.n0 or self.n0 < 0:
            raise DomainError(f"n0 must be a non-negative integer, got {self.n0}")

    @property
    def alpha(self) -> float:
        return float(self.n0 * (self.n0 - 1))

    @property
    def beta(self) -> float:
        return float(self.n0)


@dataclass(frozen=True)
class CorrelationPoint:
    t: float
    tau: float
    numerator: float
    mean_t: float
    mean_t_tau: float
    g2: float


@dataclass(frozen=True)
class MarkovParams:
    """Born-Markov baseline: decay rate kappa and thermal occupation nbar."""

    kappa: float
    nbar: float

    def __post_init__(self):
        if not self.kappa > 0:
            raise DomainError("kappa must be positive")
        if not self.nbar >= 0:
            raise DomainError("nbar must be non-negative")

    @classmethod
    def from_bath(cls, params: BathParams) -> "MarkovParams":
        """kappa = pi J(w0) and nbar = n(w0, T)."""
        nbar = bose_occupation(1.0, params.temp)
        return cls(math.pi * spectral_density(1.0, params), nbar)


def fourth_order(u_t, u_t2, v_t, v_t2, v_tt2, alpha, beta):
    """<a+(t) a+(t2) a(t2) a(t)> from u, v at the two times.

    Works elementwise on arrays.  ``v_tt2`` is v(t, t2) = <a+(t2) a(t)>.
    """
    u_t = np.asarray(u_t)
    u_t2 = np.asarray(u_t2)
    a1 = np.abs(u_t) ** 2
    a2 = np.abs(u_t2) ** 2
    cross = np.real(v_tt2 * np.conj(u_t) * u_t2)
    value = (v_t * v_t2 + np.abs(v_tt2) ** 2 + a1 * a2 * alpha
             + (v_t * a2 + v_t2 * a1 + 2.0 * cross) * beta)
    if np.any(value < -NEGATIVE_TOLERANCE):
        raise ConsistencyError(
            f"fourth-order correlator negative ({np.min(value):.3e}); "
            "the v table is inconsistent"
        )
    return value


def mean_photon(t: float, u: UFunction, v: VTable, s: InitialFock,
                alpha_weighted: bool = False) -> float:
    """<a+ a>(t) = |u(t)|^2 beta + v(t, t).

    ``alpha_weighted=True`` weights |u|^2 by alpha instead of beta, which
    does not reproduce <a+ a>(0) = n0; kept only for comparison.
    """
    i = u.grid.index(t)
    weight = s.alpha if alpha_weighted else s.beta
    return float(abs(u.values[i]) ** 2 * weight + v.diagonal[i])


def two_time_fourth_order(t: float, t2: float, u: UFunction, v: VTable,
                          s: InitialFock) -> float:
    i, j = u.grid.index(t), u.grid.index(t2)
    return float(fourth_order(u.values[i], u.values[j], v.diagonal[i],
                              v.diagonal[j], v(i, j), s.alpha, s.beta))


def g2(t: float, tau: float, u: UFunction, v: VTable, s: InitialFock,
       alpha_weighted: bool = False) -> CorrelationPoint:
    """Normalized second-order correlation between times t and t + tau."""
    if s.n0 < 1:
        raise DomainError("g2 is undefined for the vacuum start (n0 = 0)")
    num = two_time_fourth_order(t, t + tau, u, v, s)
    m1 = mean_photon(t, u, v, s, alpha_weighted)
    m2 = mean_photon(t + tau, u, v, s, alpha_weighted)
    return CorrelationPoint(t, tau, num, m1, m2, num / (m1 * m2))


def g2_curve(t: float, n_tau: int, u: UFunction, v: VTable, s: InitialFock,
             alpha_weighted: bool = False) -> dict:
    """g2(t, t + k dt) for k = 0 .. n_tau - 1, with all ingredients.

    Returns a dict of equally long arrays: tau, g2, numerator, mean_t,
    mean_t_tau.
    """
    if s.n0 < 1:
        raise DomainError("g2 is undefined for the vacuum start (n0 = 0)")
    i = u.grid.index(t)
    js = i + np.arange(n_tau)
    if js[-1] > u.grid.n_steps:
        raise DomainError("tau range extends beyond the grid")
    uv = u.values
    row = v.row(i, int(js[-1]))[js]
    num = fourth_order(uv[i], uv[js], v.diagonal[i], v.diagonal[js], row,
                       s.alpha, s.beta)
    weight = s.alpha if alpha_weighted else s.beta
    mean_t = abs(uv[i]) ** 2 * weight + v.diagonal[i]
    mean_t_tau = np.abs(uv[js]) ** 2 * weight + v.diagonal[js]
    return {
        "tau": (js - i) * u.grid.dt,
        "g2": num / (mean_t * mean_t_tau),
        "numerator": num,
        "mean_t": np.full(js.size, mean_t),
        "mean_t_tau": mean_t_tau,
    }


# --- Born-Markov baseline ---------------------------------------------------

def markov_fourth_order(t, tau, m: MarkovParams, s: InitialFock):
    """Quantum-regression result for <a+(t) a+(t+tau) a(t+tau) a(t)>."""
    t = np.asarray(t, dtype=float)
    tau = np.asarray(tau, dtype=float)
    k, nb, a, b = m.kappa, m.nbar, s.alpha, s.beta
    et = np.exp(-2 * k * t)
    etau = np.exp(-2 * k * tau)
    first = a * np.exp(-4 * k * t) + 2 * nb * (1 - et) * ((2 * b - nb) * et + nb)
    return first * etau + nb * (b * et + nb * (1 - et)) * (1 - etau)


def markov_mean_photon(t, m: MarkovParams, s: InitialFock):
    et = np.exp(-2 * m.kappa * np.asarray(t, dtype=float))
    return s.beta * et + m.nbar * (1 - et)


def markov_g2(t, tau, m: MarkovParams, s: InitialFock):
    t = np.asarray(t, dtype=float)
    tau = np.asarray(tau, dtype=float)
    return markov_fourth_order(t, tau, m, s) / (
        markov_mean_photon(t, m, s) * markov_mean_photon(t + tau, m, s))


def markov_g2_ss(tau, m: MarkovParams):
    """Thermal-light steady state 1 + exp(-2 kappa tau)."""
    return 1.0 + np.exp(-2.0 * m.kappa * np.asarray(tau, dtype=float))


# --- steady-state photon-number distribution ---------------------------------

def thermal_pn(n, v: float):
    """Bose-Einstein weights v^n / (1 + v)^(n + 1)."""
    n = np.asarray(n)
    return (v / (1.0 + v)) ** n / (1.0 + v)


def _omega(u_ss: complex, v_ss: float) -> float:
    return abs(u_ss) ** 2 / (1.0 + v_ss)


def steady_state_pn(n: int, s: InitialFock, u_ss: complex, v_ss: float) -> float:
    """Steady photon-number probability p_n for a Fock start.

    The binomial sum is accumulated in log space.  With no surviving
    amplitude (Omega = 0) the thermal weights are returned exactly.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    om = _omega(u_ss, v_ss)
    if om >= 1:
        raise DomainError(f"Omega = {om} must stay below 1")
    if om == 0:
        return float(thermal_pn(n, v_ss))
    if v_ss <= 0:
        raise DomainError("v_ss must be positive when Omega > 0")
    return float(np.exp(_log_pn(np.array([n]), s.n0, om, v_ss))[0])


def _log_pn(ns: np.ndarray, n0: int, om: float, v: float) -> np.ndarray:
    log_x = math.log(om) - math.log(v) - math.log1p(-om)
    k = np.arange(n0 + 1)
    # log C(n0, k) + log C(n, k) + k log x, masked where k > n.
    log_c0 = gammaln(n0 + 1) - gammaln(k + 1) - gammaln(n0 - k + 1)
    nn = ns[:, None].astype(float)
    valid = k[None, :] <= nn
    safe_n = np.where(valid, nn, k[None, :])
    log_cn = gammaln(safe_n + 1) - gammaln(k + 1)[None, :] - gammaln(safe_n - k[None, :] + 1)
    terms = np.where(valid, log_c0[None, :] + log_cn + k[None, :] * log_x, -np.inf)
    log_sum = logsumexp(terms, axis=1)
    return (ns * math.log(v) - (ns + 1) * math.log1p(v)
            + n0 * math.log1p(-om) + log_sum)


def steady_distribution(s: InitialFock, u_ss: complex, v_ss: float,
                        tail: float = 1e-14, n_limit: int = 10_000) -> np.ndarray:
    """p_n for n = 0 .. N with N grown until the remaining mass is below ``tail``.

    The ratio p_{n+1} / p_n decreases towards v / (1 + v) beyond the
    binomial bulk, so once it is below 1 the geometric bound
    p_n r / (1 - r) caps the tail.
    """
    om = _omega(u_ss, v_ss)
    if om >= 1:
        raise DomainError(f"Omega = {om} must stay below 1")
    if om > 0 and v_ss <= 0:
        raise DomainError("v_ss must be positive when Omega > 0")
    if v_ss == 0 and om == 0:
        return np.array([1.0])
    size = 64
    while True:
        ns = np.arange(size)
        if om == 0:
            p = thermal_pn(ns, v_ss)
        else:
            p = np.exp(_log_pn(ns, s.n0, om, v_ss))
        ratio = p[-1] / p[-2] if p[-2] > 0 else 0.0
        if size > s.n0 + 2 and ratio < 1:
            bound = p[-1] * ratio / (1 - ratio)
            if bound < tail:
                return p
        if size >= n_limit:
            raise ConvergenceError(
                f"photon-number tail not converged at N = {n_limit}"
            )
        size = min(2 * size, n_limit)


def distribution_g2(p: np.ndarray) -> float:
    """Equal-time g2 from a photon-number distribution."""
    n = np.arange(p.size)
    mean = np.sum(n * p)
    return float(np.sum(n * (n - 1) * p) / mean**2)


# --- steady-state g2 ------------------------------------------------------------

@dataclass(frozen=True)
class SteadyG2:
    tau: np.ndarray
    g2: np.ndarray
    t_big: float
    change: float
    converged: bool = True


def _curve_at(t_big: float, tau_max: float, params: BathParams, s: InitialFock,
              dt: float, samples: int, period: float, q: Quadrature):
    """g2(T, T + tau) averaged over ``samples`` points of T in [t_big, t_big + period)."""
    offsets = np.arange(samples) * (period / samples) if samples > 1 else np.zeros(1)
    offsets = np.round(offsets / dt) * dt
    grid = TimeGrid.covering(t_big + offsets[-1] + tau_max, dt)
    u = solve_u_ide(grid, params, q)
    v = v_table(grid, params, u)
    n_tau = int(round(tau_max / dt)) + 1
    curves = [g2_curve(t_big + off, n_tau, u, v, s) for off in offsets]
    return curves[0]["tau"], np.mean([c["g2"] for c in curves], axis=0)


def g2_steady(tau_max: float, params: BathParams, s: InitialFock,
              dt: float = 0.01, tol: float = STEADY_TOLERANCE,
              t_start: float = STEADY_T_START, t_limit: float = STEADY_T_LIMIT,
              q: Quadrature = DEFAULT_QUADRATURE, strict: bool = True) -> SteadyG2:
    """Long-time limit of g2(T, T + tau) on tau = 0, dt, .., tau_max.

    T is doubled from ``t_start`` until the curve moves by less than
    ``tol`` between levels.  With a localized mode the transient
    oscillates in T at the bound-state frequency, so each level averages
    the curve over one such period (the envelope centre) before comparing.

    With ``strict=False`` an unconverged result is returned (flagged by
    ``converged``) instead of raising :class:`ConvergenceError`.
    """
    mode = find_localized_mode(params, q)
    if mode is not None:
        period = 2 * math.pi / abs(mode.omega_b)
        samples = 8
    else:
        period, samples = 0.0, 1
    prev = None
    t_big = t_start
    last_t = t_start
    change = math.inf
    history = []
    while t_big <= t_limit + 1e-9:
        taus, curve = _curve_at(t_big, tau_max, params, s, dt, samples, period, q)
        if prev is not None:
            change = float(np.max(np.abs(curve - prev)))
            history.append((t_big, change))
            if change < tol:
                return SteadyG2(taus, curve, t_big, change)
        prev = curve
        last_t = t_big
        t_big *= 2
    if not strict and prev is not None:
        return SteadyG2(taus, prev, last_t, change, converged=False)
    detail = ", ".join(f"T={t:g}: {c:.2e}" for t, c in history)
    raise ConvergenceError(f"g2 steady state not converged by T = {t_limit} ({detail})")


def g2_steady_spectral(tau, params: BathParams, s: InitialFock,
                       q: Quadrature = DEFAULT_QUADRATURE,
                       mode: Optional[LocalizedMode] = None):
    """Closed-form t -> infinity limit of g2(t, t + tau) from spectral weights.

    Uses u(t) -> Z exp(-i w_b t) and the steady v(t, t + tau); an
    independent route to :func:`g2_steady`.
    """
    if mode is None:
        mode = find_localized_mode(params, q)
    tau = np.asarray(tau, dtype=float)
    corr = steady_correlation(tau, params, q, mode)
    v0 = float(steady_correlation(0.0, params, q, mode).real)
    if mode is None:
        u_t = np.zeros(tau.shape, dtype=complex)
        u_t2 = np.zeros(tau.shape, dtype=complex)
    else:
        u_t = np.full(tau.shape, mode.residue, dtype=complex)
        u_t2 = mode.residue * np.exp(-1j * mode.omega_b * tau)
    num = fourth_order(u_t, u_t2, v0, v0, corr, s.alpha, s.beta)
    mean = np.abs(u_t) ** 2 * s.beta + v0
    return num / mean**2
