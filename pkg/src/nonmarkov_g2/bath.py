"""Ohmic environment: spectral density, memory kernels and self-energy.

Units throughout: hbar = k_B = omega_0 = 1, so frequencies are in units of
the mode frequency and times in units of its inverse.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import (
    DEFAULT_QUADRATURE,
    Quadrature,
    SEMIINFINITE_CUT,
    exponential_integral,
    integrate_semiinfinite,
    principal_value_integral,
)

__all__ = [
    "BathParams",
    "OMEGA_0",
    "spectral_density",
    "critical_coupling",
    "memory_kernel",
    "bose_occupation",
    "spectral_times_occupation",
    "thermal_kernel",
    "thermal_kernel_table",
    "self_energy_shift",
    "self_energy_slope",
    "trigamma",
]

OMEGA_0 = 1.0

# Below this frequency J(w) n(w) is replaced by its w -> 0 limit eta * T.
_SMALL_OMEGA = 1e-8


@dataclass(frozen=True)
class BathParams:
    """Ohmic bath J(w) = eta * w * exp(-w / omega_c) at temperature ``temp``."""

    eta: float
    omega_c: float
    temp: float

    def __post_init__(self):
        if not self.eta > 0:
            raise DomainError(f"eta must be positive, got {self.eta}")
        if not self.omega_c > 0:
            raise DomainError(f"omega_c must be positive, got {self.omega_c}")
        if not self.temp >= 0:
            raise DomainError(f"temp must be non-negative, got {self.temp}")

    @classmethod
    def from_ratio(cls, eta_over_etac: float, omega_c: float = 5.0,
                   temp: float = 2.0) -> "BathParams":
        """Build from the coupling measured in units of the critical one."""
        return cls(eta_over_etac * OMEGA_0 / omega_c, omega_c, temp)

    @property
    def eta_c(self) -> float:
        return critical_coupling(self)

    @property
    def strong(self) -> bool:
        """True when a localized mode exists (eta strictly above eta_c)."""
        return self.eta * self.omega_c > OMEGA_0

    def with_temp(self, temp: float) -> "BathParams":
        return BathParams(self.eta, self.omega_c, temp)


def spectral_density(omega, params: BathParams):
    """J(w) = eta w exp(-w/omega_c) for w > 0 and exactly zero otherwise."""
    w = np.asarray(omega, dtype=float)
    pos = np.where(w > 0, w, 0.0)
    out = np.where(w > 0, params.eta * pos * np.exp(-pos / params.omega_c), 0.0)
    return float(out) if out.ndim == 0 else out


def critical_coupling(params: BathParams) -> float:
    return OMEGA_0 / params.omega_c


def memory_kernel(dt, params: BathParams):
    """Closed-form Fourier transform of J: eta wc^2 / (1 + i wc dt)^2."""
    dt = np.asarray(dt, dtype=float)
    wc = params.omega_c
    out = params.eta * wc**2 / (1.0 + 1j * wc * dt) ** 2
    return complex(out) if out.ndim == 0 else out


def bose_occupation(omega, temp: float):
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise DomainError("Bose occupation needs omega > 0")
    if temp < 0:
        raise DomainError("temperature must be non-negative")
    if temp == 0:
        out = np.zeros_like(w)
    else:
        out = 1.0 / np.expm1(w / temp)
    return float(out) if out.ndim == 0 else out


def spectral_times_occupation(omega, params: BathParams):
    """J(w) n(w, T) with the removable w -> 0 limit eta*T filled in."""
    w = np.asarray(omega, dtype=float)
    if params.temp == 0:
        out = np.zeros_like(w)
    else:
        T = params.temp
        small = w < _SMALL_OMEGA
        safe = np.where(small, 1.0, w)
        regular = params.eta * np.exp(-safe / params.omega_c) * safe / np.expm1(safe / T)
        out = np.where(w <= 0, 0.0, np.where(small, params.eta * T, regular))
    return float(out) if out.ndim == 0 else out


def thermal_kernel(dtau: float, params: BathParams,
                   q: Quadrature = DEFAULT_QUADRATURE) -> complex:
    """Thermal correlation kernel by direct quadrature over frequency."""
    if params.temp == 0:
        return 0j
    dtau = float(dtau)
    # Integrate the cosine and sine parts of a real integrand separately so
    # that g(-dtau) = conj(g(dtau)) holds to the last bit.
    s = abs(dtau)

    def re(w):
        return spectral_times_occupation(w, params) * np.cos(w * s)

    def im(w):
        return spectral_times_occupation(w, params) * np.sin(w * s)

    decay = 1.0 / (1.0 / params.omega_c + 1.0 / params.temp)
    # One panel edge per period over the whole truncated range; wide panels
    # of an oscillating integrand can fool the Kronrod error estimate.
    points = None
    if s > 0:
        span = 2 * SEMIINFINITE_CUT * decay
        points = list(np.arange(1, math.ceil(span * s / (2 * math.pi)) + 1)
                      * (2 * math.pi / s))
    cos_part = integrate_semiinfinite(re, 0.0, decay, q, points=points)
    sin_part = integrate_semiinfinite(im, 0.0, decay, q, points=points)
    value = complex(cos_part.value.real, -math.copysign(1.0, dtau) * sin_part.value.real)
    return value if dtau != 0 else complex(value.real, 0.0)


def trigamma(z):
    """Trigamma function for complex arguments with Re z > 0.

    Recurrence up to Re z >= 20, then the asymptotic series.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z.real <= 0):
        raise DomainError("trigamma implemented for Re z > 0 only")
    shift = int(max(0, math.ceil(20.0 - float(np.min(z.real)))))
    acc = np.zeros_like(z)
    for k in range(shift):
        acc += 1.0 / (z + k) ** 2
    w = z + shift
    w2 = 1.0 / (w * w)
    # Bernoulli-number series in 1/w^2.
    series = w2 * (1.0 / 6 + w2 * (-1.0 / 30 + w2 * (1.0 / 42 + w2 * (
        -1.0 / 30 + w2 * (5.0 / 66 + w2 * (-691.0 / 2730 + w2 * 7.0 / 6))))))
    tail = (1.0 + 0.5 / w + series) / w
    return acc + tail


def thermal_kernel_table(dtau, params: BathParams) -> np.ndarray:
    """Thermal kernel on many time lags from its series closed form.

    Expanding n(w) = sum_m exp(-m w / T) makes each term an elementary
    Laplace transform, which resums to eta T^2 psi'(1 + T/wc + i T dtau).
    """
    dtau = np.asarray(dtau, dtype=float)
    if params.temp == 0:
        return np.zeros(dtau.shape, dtype=complex)
    T = params.temp
    z = 1.0 + T / params.omega_c + 1j * T * np.abs(dtau)
    val = params.eta * T * T * trigamma(z)
    # Symmetric lags share the evaluation; conjugation keeps Hermiticity exact.
    return np.where(dtau < 0, np.conj(val), val)


def _shift_closed(w: np.ndarray, params: BathParams) -> np.ndarray:
    eta, wc = params.eta, params.omega_c
    out = np.full(w.shape, -eta * wc)
    nz = w != 0
    x = w[nz] / wc
    out[nz] = eta * (w[nz] * np.exp(-x) * exponential_integral(x) - wc)
    return out


def self_energy_shift(omega, params: BathParams,
                      q: Quadrature = DEFAULT_QUADRATURE,
                      method: str = "closed"):
    """Bath-induced frequency shift, the principal value of J(w')/(w - w').

    ``method="closed"`` uses the exponential-integral form
    eta [w exp(-w/wc) Ei(w/wc) - wc]; ``method="quadrature"`` evaluates the
    principal value numerically (regular quadrature for w <= 0).
    """
    w = np.asarray(omega, dtype=float)
    if method == "closed":
        out = _shift_closed(np.atleast_1d(w), params).reshape(w.shape)
    elif method == "quadrature":
        vals = [_shift_quadrature(float(x), params, q) for x in np.atleast_1d(w)]
        out = np.asarray(vals).reshape(w.shape)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out) if out.ndim == 0 else out


def _shift_quadrature(w: float, params: BathParams, q: Quadrature) -> float:
    def J(x):
        return spectral_density(x, params)

    if w > 0:
        pv = principal_value_integral(J, w, 0.0, math.inf, q,
                                      decay_scale=params.omega_c)
        return -pv.real

    def regular(x):
        return spectral_density(x, params) / (w - x)

    res = integrate_semiinfinite(regular, 0.0, params.omega_c, q)
    return res.value.real


def self_energy_slope(omega: float, params: BathParams,
                      q: Quadrature = DEFAULT_QUADRATURE,
                      method: str = "quadrature") -> float:
    """Derivative of the self-energy below the continuum (w < 0).

    Equals minus the integral of J(w') / (w - w')^2 and is strictly
    negative.  ``method="closed"`` uses
    eta [(1 - w/wc) exp(-w/wc) Ei(w/wc) + 1].
    """
    w = float(omega)
    if not w < 0:
        raise DomainError("self-energy slope is only defined for omega < 0")
    if method == "closed":
        x = w / params.omega_c
        return params.eta * ((1.0 - x) * math.exp(-x) * exponential_integral(x) + 1.0)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")

    def integrand(x):
        return spectral_density(x, params) / (w - x) ** 2

    res = integrate_semiinfinite(integrand, 0.0, params.omega_c, q)
    return -res.value.real
