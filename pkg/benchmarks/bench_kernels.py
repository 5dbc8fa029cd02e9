#!/usr/bin/env python3
"""Benchmark the compiled L1 kernel against the numpy fallback.

The implicit L1 update carries a full history sum per step (O(Nt^2) per
mode solve), repeated once per mode per fixed-point sweep, so this loop
dominates reconstruction runtime.  The script times both implementations
on single mode solves and on a full reconstruction sweep, and checks that
they agree to roundoff.

Run:  python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import math
import time

import numpy as np

from subdiff import (
    CoefficientSamples,
    InverseConfig,
    TimeGrid,
    build_interval,
    flux_trace,
    project,
    reconstruct,
    solve_direct,
)
from subdiff._kernels_py import l1_solve_mode as solve_py
from subdiff.fracops import l1_weights

try:
    from subdiff._kernels import l1_solve_mode as solve_cy
except ImportError:
    solve_cy = None


def time_fn(fn, *args, repeats: int = 5) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_mode_solves() -> None:
    print("single mode solve (alpha=0.9, lam=pi^2):")
    print(f"{'Nt':>6} {'python':>12} {'cython':>12} {'speedup':>9} {'max diff':>10}")
    for Nt in (250, 500, 1000, 2000, 4000):
        grid = TimeGrid(1.0, Nt)
        w = l1_weights(0.9, Nt).b
        a = np.sin(5.0 * np.pi * grid.nodes) + 1.3
        F = 0.5 * (grid.nodes + 1.0)
        args = (w, math.pi**2, a, F, 0.7, grid.tau ** (-0.9))
        t_py = time_fn(solve_py, *args)
        if solve_cy is None:
            print(f"{Nt:>6} {t_py * 1e3:>10.2f}ms {'n/a':>12} {'n/a':>9} {'n/a':>10}")
            continue
        t_cy = time_fn(solve_cy, *args)
        diff = float(np.abs(solve_py(*args) - solve_cy(*args)).max())
        print(
            f"{Nt:>6} {t_py * 1e3:>10.2f}ms {t_cy * 1e3:>10.2f}ms "
            f"{t_py / t_cy:>8.1f}x {diff:>10.1e}"
        )


def bench_reconstruction() -> None:
    import os
    import subprocess
    import sys

    print("\nfull reconstruction (smooth coefficient, alpha=0.9, Nt=1000):")
    grid = TimeGrid(1.0, 1000)
    es = build_interval(32, 0.0)
    pd = project(es, "neg_sin_pi_x", ("neg_sin_pi_x", "t_plus_1"), grid)
    a_true = CoefficientSamples(np.sin(5.0 * np.pi * grid.nodes) + 1.3, grid)
    g = flux_trace(es, solve_direct(es, pd, a_true, 0.9), a_true)
    cfg = InverseConfig(epsilon0=1e-6, max_iters=500, alpha=0.9)
    t0 = time.perf_counter()
    res = reconstruct(g, es, pd, cfg)
    dt = time.perf_counter() - t0
    from subdiff import backend_name

    print(
        f"  active backend ({backend_name()}): {res.n_iters} sweeps in {dt:.3f}s",
        flush=True,
    )
    if backend_name() == "cython":
        # rerun in a subprocess with the fallback forced
        code = (
            "import time, numpy as np\n"
            "from subdiff import *\n"
            "grid = TimeGrid(1.0, 1000)\n"
            "es = build_interval(32, 0.0)\n"
            "pd = project(es, 'neg_sin_pi_x', ('neg_sin_pi_x', 't_plus_1'), grid)\n"
            "a = CoefficientSamples(np.sin(5*np.pi*grid.nodes) + 1.3, grid)\n"
            "g = flux_trace(es, solve_direct(es, pd, a, 0.9), a)\n"
            "cfg = InverseConfig(epsilon0=1e-6, max_iters=500, alpha=0.9)\n"
            "t0 = time.perf_counter()\n"
            "res = reconstruct(g, es, pd, cfg)\n"
            "print(f'  python fallback: {res.n_iters} sweeps in "
            "{time.perf_counter()-t0:.3f}s')\n"
        )
        env = dict(os.environ, SUBDIFF_PURE_PYTHON="1")
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


if __name__ == "__main__":
    bench_mode_solves()
    bench_reconstruction()
