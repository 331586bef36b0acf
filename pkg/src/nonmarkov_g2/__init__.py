"""Exact two-time photon correlations of a bosonic mode in an Ohmic bath.

Modules
-------
numerics      adaptive quadrature, principal values, roots, Ei
bath          Ohmic spectral density, kernels, self-energy
greens        u(t) by time stepping and by spectral decomposition, v(t, t')
photon_stats  fourth-order correlator, g2, Markov baseline, steady states
oracle        discretized-bath and Fock-space reference solutions
cli           presets, sweeps and CSV output
"""
from .bath import BathParams
from .errors import (
    BracketError,
    ConfigurationError,
    ConsistencyError,
    ConvergenceError,
    DomainError,
)
from .greens import TimeGrid, find_localized_mode, solve_u_ide, u_spectral, v_table
from .photon_stats import InitialFock, g2, g2_curve, g2_steady

__version__ = "0.1.0"

__all__ = [
    "BathParams",
    "TimeGrid",
    "InitialFock",
    "solve_u_ide",
    "u_spectral",
    "v_table",
    "find_localized_mode",
    "g2",
    "g2_curve",
    "g2_steady",
    "DomainError",
    "ConfigurationError",
    "ConvergenceError",
    "ConsistencyError",
    "BracketError",
]
