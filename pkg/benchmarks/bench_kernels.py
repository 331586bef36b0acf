"""Time the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--t-max 60] [--dt 0.01] [--repeat 3]
"""
import argparse
import time

import numpy as np

from nonmarkov_g2 import kernels
from nonmarkov_g2.bath import OMEGA_0, BathParams, thermal_kernel_table
from nonmarkov_g2.greens import TimeGrid, history_weights


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--t-max", type=float, default=60.0)
    parser.add_argument("--dt", type=float, default=0.01)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    params = BathParams.from_ratio(1.5, 5.0, 2.0)
    grid = TimeGrid.covering(args.t_max, args.dt)
    weights, end = history_weights(grid, params)
    gt = thermal_kernel_table(grid.times, params)
    mid = grid.n_steps // 2

    cases = {
        "solve_volterra": lambda: kernels.solve_volterra(weights, end, OMEGA_0, grid.dt),
        "v_diagonal": None,
        "v_row (middle)": None,
    }
    print(f"grid: {grid.n_steps + 1} points (t_max = {args.t_max}, dt = {args.dt})")
    print(f"{'kernel':<18}" + "".join(f"{b:>12}" for b in kernels.available_backends())
          + f"{'speed-up':>10}{'max diff':>12}")
    original = kernels.backend()
    try:
        for name in cases:
            timings, results = [], []
            for b in kernels.available_backends():
                kernels.use_backend(b)
                u = kernels.solve_volterra(weights, end, OMEGA_0, grid.dt)
                if name == "solve_volterra":
                    fn = cases[name]
                elif name == "v_diagonal":
                    fn = lambda: kernels.v_diagonal(u, gt, grid.dt)
                else:
                    fn = lambda: kernels.v_row(u, gt, mid, grid.n_steps, grid.dt)
                elapsed, out = best_of(fn, args.repeat)
                timings.append(elapsed)
                results.append(np.asarray(out))
            line = f"{name:<18}" + "".join(f"{t * 1e3:>10.1f}ms" for t in timings)
            if len(timings) == 2:
                diff = float(np.max(np.abs(results[0] - results[1])))
                line += f"{timings[1] / timings[0]:>9.1f}x{diff:>12.1e}"
            print(line)
    finally:
        kernels.use_backend(original)


if __name__ == "__main__":
    main()
