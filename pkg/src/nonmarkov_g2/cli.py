"""Command-line driver: scenario presets, parameter sweeps and CSV output.

Configuration files are flat ``section.key = value`` lines with ``#``
comments.  A preset (``--preset``) is applied first, the file overrides
it, and command-line flags override both.  Output rows are assembled in
memory, sorted, and written once with round-trip float formatting, so a
given configuration always yields the same bytes whatever the thread
count.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import greens
from .bath import BathParams
from .errors import (
    BracketError,
    ConfigurationError,
    ConsistencyError,
    ConvergenceError,
    DomainError,
)
from .greens import (
    TimeGrid,
    VTable,
    continuum_weight,
    find_localized_mode,
    pole_function,
    solve_u_ide,
    u_spectral,
    v_steady,
)
from .oracle import DiscretizedBath
from .photon_stats import (
    STEADY_T_LIMIT,
    STEADY_T_START,
    STEADY_TOLERANCE,
    InitialFock,
    MarkovParams,
    distribution_g2,
    g2_curve,
    g2_steady,
    markov_g2,
    steady_distribution,
)

__all__ = [
    "SCENARIOS",
    "PRESETS",
    "ParseError",
    "ScenarioConfig",
    "parse_config",
    "run_g2_scan",
    "run_temp_scan",
    "run_steady",
    "run_pn",
    "run_validate",
    "run_oracle",
    "format_csv",
    "main",
]

SCENARIOS = ("g2-scan", "temp-scan", "steady", "pn", "validate", "oracle")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3

DEFAULT_T_LIST = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)

# Preset values are written in the config syntax so they go through the
# same parser and validation as a user file.
PRESETS: Dict[str, Dict[str, str]] = {
    "fig1a": {"bath.eta_over_etac": "0.5"},
    "fig1b": {"bath.eta_over_etac": "1.5"},
    "fig2a": {"bath.eta_over_etac": "0.5", "scan.t": "1",
              "scan.temp_list": "1, 2, 5, 10"},
    "fig2b": {"bath.eta_over_etac": "1.5", "scan.t": "1",
              "scan.temp_list": "2, 10, 100"},
    "fig3": {"bath.eta_over_etac": "1.5", "scan.temp_list": "2, 10, 100",
             "scan.tau_max": "20", "grid.dt": "0.02"},
}


class ParseError(ConfigurationError):
    """Configuration problem tied to a line and key of the document."""

    def __init__(self, message: str, line: Optional[int] = None,
                 key: Optional[str] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(key)
        prefix = ": ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.line = line
        self.key = key


def _float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("value must be finite")
    return value


def _int(text: str) -> int:
    return int(text)


def _float_list(text: str) -> Tuple[float, ...]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ValueError("empty list")
    return tuple(_float(s) for s in items)


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_KEYS: Dict[str, Callable[[str], object]] = {
    "bath.eta_over_etac": _float,
    "bath.eta": _float,
    "bath.omega_c": _float,
    "bath.temp": _float,
    "state.n0": _int,
    "grid.dt": _float,
    "grid.t_max": _float,
    "scan.t_list": _float_list,
    "scan.t": _float,
    "scan.tau_max": _float,
    "scan.temp_list": _float_list,
    "steady.tol": _float,
    "steady.t_start": _float,
    "steady.t_limit": _float,
    "pn.force_thermal": _bool,
    "oracle.n_modes": _int,
    "oracle.omega_max_factor": _float,
    "oracle.t_max": _float,
    "validate.t_max": _float,
    "output.path": str,
    "run.threads": _int,
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated settings for one subcommand run."""

    scenario: str
    bath: BathParams
    n0: int
    grid: TimeGrid
    t_list: Tuple[float, ...]
    tau_max: float
    temp_list: Tuple[float, ...]
    output_path: Optional[str] = None
    threads: int = 1
    steady_tol: float = STEADY_TOLERANCE
    steady_t_start: float = STEADY_T_START
    steady_t_limit: float = STEADY_T_LIMIT
    force_thermal: bool = False
    oracle_modes: int = 2000
    oracle_omega_max_factor: float = 20.0
    check_t_max: float = 30.0
    lines: Dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    @property
    def state(self) -> InitialFock:
        return InitialFock(self.n0)


def _read_document(text: str, lines: Dict[str, int],
                   values: Dict[str, object]) -> None:
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError("expected 'section.key = value'", number)
        key, _, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KEYS:
            raise ParseError("unknown key", number, key)
        if key in lines and lines[key] > 0:
            raise ParseError(f"duplicate key (first set on line {lines[key]})",
                             number, key)
        if not value:
            raise ParseError("missing value", number, key)
        try:
            values[key] = _KEYS[key](value)
        except ValueError as exc:
            raise ParseError(f"bad value {value!r} ({exc})", number, key) from None
        lines[key] = number


def parse_config(text: str = "", scenario: str = "g2-scan",
                 preset: Optional[str] = None) -> ScenarioConfig:
    """Parse and validate a configuration document.

    Missing keys take the weak-coupling defaults (eta = 0.5 eta_c,
    omega_c = 5, T = 2, n0 = 5).  Errors carry the line number and key.
    """
    if scenario not in SCENARIOS:
        raise ParseError(f"unknown scenario {scenario!r}")
    values: Dict[str, object] = {}
    # Line 0 marks values that came from a preset.
    lines: Dict[str, int] = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ParseError(f"unknown preset {preset!r}")
        for key, value in PRESETS[preset].items():
            values[key] = _KEYS[key](value)
            lines[key] = 0
    _read_document(text, lines, values)

    def line(key):
        n = lines.get(key)
        return n if n else None

    def fail(message, key):
        raise ParseError(message, line(key), key)

    if lines.get("bath.eta", 0) > 0 and lines.get("bath.eta_over_etac", 0) > 0:
        fail("give either bath.eta or bath.eta_over_etac, not both", "bath.eta")
    omega_c = values.get("bath.omega_c", 5.0)
    temp = values.get("bath.temp", 2.0)
    try:
        # Presets only set the ratio, so an explicit eta always wins.
        if "bath.eta" in values:
            bath = BathParams(values["bath.eta"], omega_c, temp)
        else:
            bath = BathParams.from_ratio(values.get("bath.eta_over_etac", 0.5),
                                         omega_c, temp)
    except (ConfigurationError, DomainError, ValueError) as exc:
        key = next((k for k in ("bath.eta", "bath.eta_over_etac", "bath.omega_c",
                                "bath.temp") if line(k)), "bath")
        fail(str(exc), key)

    n0 = values.get("state.n0", 5)
    if n0 < 0:
        fail("n0 must be non-negative", "state.n0")
    dt = values.get("grid.dt", 0.01)
    if not dt > 0 or dt > greens.MAX_DT:
        fail(f"dt = {dt} outside (0, {greens.MAX_DT}] (resolution guard)", "grid.dt")

    if scenario == "temp-scan":
        t_list = (values.get("scan.t", 1.0),)
        t_key = "scan.t"
    else:
        t_list = values.get("scan.t_list", DEFAULT_T_LIST)
        t_key = "scan.t_list"
    t_list = tuple(sorted(set(t_list)))
    if t_list[0] < 0:
        fail("times must be non-negative", t_key)
    tau_max = values.get("scan.tau_max", 30.0)
    if tau_max < 0:
        fail("tau_max must be non-negative", "scan.tau_max")
    temp_list = tuple(sorted(set(values.get("scan.temp_list", (bath.temp,)))))
    if temp_list[0] < 0:
        fail("temperatures must be non-negative", "scan.temp_list")

    def on_grid(t):
        k = round(t / dt)
        return abs(k * dt - t) <= 1e-9 * max(1.0, abs(t))

    scanning = scenario in ("g2-scan", "temp-scan")
    for t in t_list if scanning else ():
        if not on_grid(t):
            fail(f"time {t} is not a multiple of dt = {dt}", t_key)
    if scenario in ("g2-scan", "temp-scan", "steady") and not on_grid(tau_max):
        fail(f"tau_max {tau_max} is not a multiple of dt = {dt}", "scan.tau_max")
    needed = (max(t_list) if scanning else 0.0) + tau_max
    t_max = values.get("grid.t_max", needed)
    if scanning and "grid.t_max" in values and tau_max > t_max - max(t_list) + 1e-9 * max(1.0, t_max):
        fail(f"tau_max {tau_max} exceeds grid.t_max - max(t) = "
             f"{t_max - max(t_list)}", "scan.tau_max")
    try:
        grid = TimeGrid.covering(max(t_max, dt), dt)
    except ConfigurationError as exc:
        fail(str(exc), "grid.dt")

    threads = values.get("run.threads", 1)
    if threads < 1:
        fail("threads must be at least 1", "run.threads")
    modes = values.get("oracle.n_modes", 2000)
    if modes < 1:
        fail("n_modes must be positive", "oracle.n_modes")
    tol = values.get("steady.tol", STEADY_TOLERANCE)
    if not tol > 0:
        fail("tolerance must be positive", "steady.tol")
    t_start = values.get("steady.t_start", STEADY_T_START)
    t_limit = values.get("steady.t_limit", STEADY_T_LIMIT)
    if not 0 < t_start <= t_limit:
        fail("need 0 < t_start <= t_limit", "steady.t_start")
    factor = values.get("oracle.omega_max_factor", 20.0)
    if not factor > 0:
        fail("omega_max_factor must be positive", "oracle.omega_max_factor")
    check_key = "oracle.t_max" if scenario == "oracle" else "validate.t_max"
    check_t_max = values.get(check_key, 30.0)
    if not check_t_max > 0:
        fail("t_max must be positive", check_key)

    return ScenarioConfig(
        scenario=scenario, bath=bath, n0=n0, grid=grid, t_list=t_list,
        tau_max=tau_max, temp_list=temp_list,
        output_path=values.get("output.path"), threads=threads,
        steady_tol=tol, steady_t_start=t_start, steady_t_limit=t_limit,
        force_thermal=values.get("pn.force_thermal", False),
        oracle_modes=modes, oracle_omega_max_factor=factor,
        check_t_max=check_t_max, lines=dict(lines),
    )


# --- execution helpers ------------------------------------------------------

def _map(fn, items: Sequence, threads: int) -> list:
    """Ordered map, on a thread pool when more than one worker is allowed."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


@dataclass
class Table:
    """Header plus rows, with optional trailing comment lines."""

    header: Tuple[str, ...]
    rows: List[tuple] = field(default_factory=list)
    comments: List[str] = field(default_factory=list)


def _cell(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def format_csv(table: Table) -> str:
    out = [",".join(table.header)]
    out.extend(",".join(_cell(x) for x in row) for row in table.rows)
    out.extend(f"# {c}" for c in table.comments)
    return "\n".join(out) + "\n"


def _scan(cfg: ScenarioConfig) -> Table:
    s = cfg.state
    grid = cfg.grid
    u = solve_u_ide(grid, cfg.bath)
    n_tau = int(round(cfg.tau_max / grid.dt)) + 1
    starts = [grid.index(t) for t in cfg.t_list]
    j_max = max(starts) + n_tau - 1
    inner = cfg.threads if len(cfg.temp_list) == 1 else 1

    def one_temp(temp):
        v = VTable(grid, cfg.bath.with_temp(temp), u, threads=inner)
        v.prefetch(starts, j_max)
        rows = []
        for t, i in zip(cfg.t_list, starts):
            curve = g2_curve(t, n_tau, u, v, s)
            if not np.all(np.isfinite(curve["g2"])) or np.any(curve["g2"] < 0):
                raise ConsistencyError(f"non-finite or negative g2 at T_s={temp}, t={t}")
            ut = u.values[i]
            for k in range(n_tau):
                rows.append((temp, t, k * grid.dt, curve["g2"][k],
                             curve["numerator"][k], curve["mean_t"][k],
                             curve["mean_t_tau"][k], ut.real, ut.imag,
                             v.diagonal[i]))
        return rows

    table = Table(("T_s", "t", "tau", "g2", "numerator", "mean_t", "mean_t_tau",
                   "u_re_t", "u_im_t", "v_t"))
    for rows in _map(one_temp, cfg.temp_list, cfg.threads):
        table.rows.extend(rows)
    return table


def run_g2_scan(cfg: ScenarioConfig) -> Table:
    """g2(t, t + tau) for every t in t_list and tau on [0, tau_max]."""
    return _scan(cfg)


def run_temp_scan(cfg: ScenarioConfig) -> Table:
    """g2(t, t + tau) at one fixed t for every temperature in temp_list."""
    return _scan(cfg)


def run_steady(cfg: ScenarioConfig) -> Table:
    """Long-time g2 curve per temperature, with the T used and a convergence flag."""
    s = cfg.state

    def one_temp(temp):
        return g2_steady(cfg.tau_max, cfg.bath.with_temp(temp), s, dt=cfg.grid.dt,
                         tol=cfg.steady_tol, t_start=cfg.steady_t_start,
                         t_limit=cfg.steady_t_limit, strict=False)

    table = Table(("T_s", "tau", "g2_ss", "t_big_used", "converged"))
    for temp, res in zip(cfg.temp_list, _map(one_temp, cfg.temp_list, cfg.threads)):
        for tau, val in zip(res.tau, res.g2):
            table.rows.append((temp, tau, val, res.t_big, res.converged))
    return table


def run_pn(cfg: ScenarioConfig) -> Table:
    """Steady photon-number distribution per temperature plus summary lines."""
    s = cfg.state
    mode = find_localized_mode(cfg.bath)
    u_ss = 0.0 if (mode is None or cfg.force_thermal) else mode.residue

    def one_temp(temp):
        v_ss = v_steady(cfg.bath.with_temp(temp), mode=mode)
        return v_ss, steady_distribution(s, u_ss, v_ss)

    table = Table(("T_s", "n", "p_n"))
    for temp, (v_ss, p) in zip(cfg.temp_list,
                               _map(one_temp, cfg.temp_list, cfg.threads)):
        table.rows.extend((temp, n, pn) for n, pn in enumerate(p))
        n = np.arange(p.size)
        fields = [
            ("T_s", temp),
            ("normalization", float(np.sum(p))),
            ("first_moment", float(np.sum(n * p))),
            ("abs_u_ss", abs(u_ss)),
            ("v_ss", v_ss),
            ("omega_b", mode.omega_b if mode else math.nan),
            ("Z", mode.residue if mode else 0.0),
            ("g2_0", distribution_g2(p) if np.sum(n * p) > 0 else math.nan),
            ("n_max", p.size - 1),
        ]
        table.comments.append("summary: " + ",".join(f"{k}={_cell(v)}" for k, v in fields))
    return table


# --- checks ------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.threshold)


def _check_table(checks: Sequence[Check]) -> Table:
    return Table(("check", "residual", "threshold", "pass"),
                 [(c.name, c.residual, c.threshold, c.passed) for c in checks])


def route_threshold(dt: float) -> float:
    """Allowed u route deviation: 1e-3 at dt = 0.01, scaled as dt^2 above."""
    return 1e-3 * max(1.0, (dt / 0.01) ** 2)


def _route_deviation(params: BathParams, dt: float, t_max: float, exact) -> float:
    grid = TimeGrid.covering(t_max, dt)
    u = solve_u_ide(grid, params)
    return float(np.max(np.abs(u.values - exact(grid.times))))


def run_validate(cfg: ScenarioConfig) -> List[Check]:
    """Invariant suite with measured residuals."""
    bath, dt = cfg.bath, cfg.grid.dt
    t_max = cfg.check_t_max
    checks: List[Check] = []
    mode = find_localized_mode(bath)
    z = mode.residue if mode else 0.0
    checks.append(Check("sum_rule", abs(z + continuum_weight(bath) - 1.0), 1e-6))
    if mode is not None:
        checks.append(Check("pole_residual",
                            abs(float(pole_function(mode.omega_b, bath))), 1e-10))
        outside = max(0.0, -mode.residue, mode.residue - 1.0)
        checks.append(Check("residue_in_unit_interval", outside, 0.0))
        checks.append(Check("pole_below_continuum", max(0.0, mode.omega_b), 0.0))

    cache = {}

    def exact(times):
        key = (times.size, float(times[-1]))
        if key not in cache:
            cache[key] = u_spectral(times, bath, mode=mode)
        return cache[key]

    coarse = _route_deviation(bath, dt, t_max, exact)
    checks.append(Check("route_agreement", coarse, route_threshold(dt)))
    fine = _route_deviation(bath, dt / 2, t_max, exact)
    checks.append(Check("refinement_ratio_inverse", fine / coarse if coarse > 0 else 0.0,
                        1 / 3.5))

    grid = TimeGrid.covering(t_max, dt)
    u = solve_u_ide(grid, bath)
    v = VTable(grid, bath, u, threads=cfg.threads)
    picks = sorted({grid.n_steps // 4, grid.n_steps // 2, grid.n_steps})
    v.prefetch(picks)
    herm = 0.0
    cs = 0.0
    for a in picks:
        for b in picks:
            herm = max(herm, abs(v.row(a)[b] - np.conj(v.row(b)[a])))
        row = v.row(a)
        excess = np.abs(row) ** 2 - v.diagonal[a] * v.diagonal
        scale = max(1.0, float(np.max(v.diagonal)) ** 2)
        cs = max(cs, float(np.max(excess)) / scale)
    checks.append(Check("hermiticity", herm, 1e-10))
    checks.append(Check("cauchy_schwarz", max(cs, 0.0), 1e-12))
    if cfg.n0 >= 1:
        s = cfg.state
        curve = g2_curve(0.0, grid.n_steps + 1, u, v, s)
        checks.append(Check("g2_nonnegative", max(0.0, -float(np.min(curve["g2"]))), 0.0))

    weak = BathParams.from_ratio(0.01, bath.omega_c, bath.temp)
    markov = MarkovParams.from_bath(weak)
    s = InitialFock(max(cfg.n0, 1))
    # A step that divides 5 keeps every sampled t on the grid.
    mgrid = TimeGrid.covering(50.0, 5.0 / math.ceil(5.0 / dt))
    mu = solve_u_ide(mgrid, weak)
    mv = VTable(mgrid, weak, mu, threads=cfg.threads)
    n_tau = int(round(20.0 / mgrid.dt)) + 1
    starts = [5.0, 10.0, 20.0, 30.0]
    mv.prefetch([mgrid.index(t) for t in starts], mgrid.index(30.0) + n_tau - 1)
    worst = 0.0
    for t in starts:
        curve = g2_curve(t, n_tau, mu, mv, s)
        base = markov_g2(t, curve["tau"], markov, s)
        worst = max(worst, float(np.max(np.abs(curve["g2"] / base - 1.0))))
    checks.append(Check("markov_limit", worst, 0.05))
    return checks


def run_oracle(cfg: ScenarioConfig) -> List[Check]:
    """Compare u and v against the discretized-bath oracle."""
    bath, dt = cfg.bath, cfg.grid.dt
    oracle = DiscretizedBath(bath, cfg.oracle_modes, cfg.oracle_omega_max_factor)
    grid = TimeGrid.covering(cfg.check_t_max, dt)
    u = solve_u_ide(grid, bath)
    v = VTable(grid, bath, u, threads=cfg.threads)
    times = grid.times
    u_or = oracle.u(times)
    checks = [
        Check("u_max_deviation", float(np.max(np.abs(u_or - u.values))), 1e-3),
        Check("v_diagonal_max_deviation",
              float(np.max(np.abs(oracle.v_diagonal(times) - v.diagonal))), 5e-3),
    ]
    mid = grid.n_steps // 2
    row_or = oracle.v([times[mid]], times)[0]
    checks.append(Check("v_row_max_deviation",
                        float(np.max(np.abs(row_or - v.row(mid)))), 5e-3))
    mode = find_localized_mode(bath)
    if mode is not None:
        tail = times >= 2 * cfg.check_t_max / 3
        plateau = float(np.mean(np.abs(u_or[tail])))
        checks.append(Check("plateau_vs_residue",
                            abs(plateau - mode.residue) / mode.residue, 0.02))
    return checks


# --- entry point -----------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonmarkov-g2",
        description="Exact two-time photon correlations of a mode in an Ohmic bath.")
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--config", help="configuration file (section.key = value)")
    parser.add_argument("--output", help="CSV destination (default: standard output)")
    parser.add_argument("--threads", type=int, help="worker threads")
    parser.add_argument("--preset", choices=sorted(PRESETS))
    return parser


def _emit(text: str, path: Optional[str], out) -> None:
    if path is None:
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        text = ""
        if args.config is not None:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        cfg = parse_config(text, args.scenario, args.preset)
        if args.threads is not None:
            if args.threads < 1:
                raise ParseError("threads must be at least 1", key="--threads")
            cfg = replace(cfg, threads=args.threads)
        if args.output is not None:
            cfg = replace(cfg, output_path=args.output)
    except (ConfigurationError, OSError) as exc:
        err.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG

    runners = {
        "g2-scan": run_g2_scan,
        "temp-scan": run_temp_scan,
        "steady": run_steady,
        "pn": run_pn,
        "validate": run_validate,
        "oracle": run_oracle,
    }
    try:
        result = runners[cfg.scenario](cfg)
    except (ConfigurationError, DomainError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except (ConvergenceError, ConsistencyError, BracketError) as exc:
        err.write(f"numerical failure: {exc} (0 rows written)\n")
        return EXIT_NUMERICAL

    if cfg.scenario in ("validate", "oracle"):
        checks = result
        report = [f"{cfg.scenario}: eta = {cfg.bath.eta:g}, omega_c = "
                  f"{cfg.bath.omega_c:g}, T = {cfg.bath.temp:g}, dt = {cfg.grid.dt:g}"]
        for c in checks:
            status = "PASS" if c.passed else "FAIL"
            report.append(f"  {status}  {c.name:<28} residual {c.residual:.3e}"
                          f"  threshold {c.threshold:.3e}")
        out.write("\n".join(report) + "\n")
        _emit(format_csv(_check_table(checks)), cfg.output_path, out)
        return EXIT_OK if all(c.passed for c in checks) else EXIT_VALIDATION

    table = result
    try:
        _emit(format_csv(table), cfg.output_path, out)
    except OSError as exc:
        err.write(f"cannot write output: {exc}\n")
        return EXIT_CONFIG
    if cfg.scenario == "steady" and not all(r[-1] for r in table.rows):
        err.write("steady state not converged for some temperatures "
                  "(see the converged column)\n")
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
