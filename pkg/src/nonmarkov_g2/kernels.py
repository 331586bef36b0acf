"""Backend selection for the time-stepping kernels.

The compiled extension is used when importable, otherwise the numpy
implementation.  ``use_backend`` switches explicitly (benchmarks, tests).
"""
from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

__all__ = ["backend", "available_backends", "use_backend",
           "solve_volterra", "v_diagonal", "v_row"]

_active = _compiled if _compiled is not None else _kernels_py


def available_backends():
    return ["compiled", "python"] if _compiled is not None else ["python"]


def backend() -> str:
    return "compiled" if _active is _compiled else "python"


def use_backend(name: str) -> None:
    global _active
    if name == "python":
        _active = _kernels_py
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")


def solve_volterra(weights, end_weights, omega0, dt):
    return _active.solve_volterra(weights, end_weights, omega0, dt)


def v_diagonal(u, gt, dt):
    return _active.v_diagonal(u, gt, dt)


def v_row(u, gt, i, j_max, dt):
    return _active.v_row(u, gt, i, j_max, dt)
