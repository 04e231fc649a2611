#!/usr/bin/env python3
"""Compare the compiled kernels against the pure numpy/scipy fallback.

Times the per-point pipeline (stability gate + Lyapunov solve + pair
entanglement) on the default operating point, and a full stability map, for
every backend that imported.  Run from an installed environment:

    python3 benchmarks/bench_backends.py [--points N] [--grid N]
"""

import argparse
import time

import numpy as np

from ommsim import model
from ommsim.backend import available_backends
from ommsim.sweep import SweepAxis, SweepSpec, run_sweep

W_B = model.TWO_PI * 1e7


def bench_point(backend, n_points):
    cfg = model.default_config()
    ss = model.solve_steady_state(cfg)
    A = model.build_drift(cfg, ss)
    d = np.ascontiguousarray(np.diag(model.build_diffusion(cfg)))
    pairs = np.array([[3, 5], [0, 1], [2, 1], [2, 4]], dtype=np.int64)
    args = (1e-9, 1e-10, 1e-13, 3)
    backend.evaluate_point(A, d, pairs, *args)  # warm up
    t0 = time.perf_counter()
    for _ in range(n_points):
        backend.evaluate_point(A, d, pairs, *args)
    dt = time.perf_counter() - t0
    return dt / n_points


def bench_sweep(backend_name_, grid):
    import ommsim.backend as bk
    import ommsim.sweep as sw
    original = bk.impl
    bk.impl = available_backends()[backend_name_]
    sw.impl = bk.impl
    try:
        spec = SweepSpec(
            base=model.default_config(),
            axes=(
                SweepAxis("drives.detuning_a", 0.005 * W_B, 2 * W_B, grid),
                SweepAxis(
                    ("drives.detuning_A1", "drives.detuning_A2",
                     "drives.detuning_m1", "drives.detuning_m2"),
                    -2 * W_B, 2 * W_B, grid),
            ),
            pairs=(("m1", "m2"),),
        )
        t0 = time.perf_counter()
        run_sweep(spec, threads=1)
        return time.perf_counter() - t0
    finally:
        bk.impl = original
        sw.impl = original


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=2000,
                    help="single-point pipeline repetitions")
    ap.add_argument("--grid", type=int, default=120,
                    help="stability-map edge length")
    args = ap.parse_args()

    backends = available_backends()
    print(f"backends available: {', '.join(backends)}")

    per_point = {}
    for name, backend in backends.items():
        per_point[name] = bench_point(backend, args.points)
        print(f"  {name:9s} point pipeline: "
              f"{per_point[name] * 1e6:8.1f} us/point")
    if "compiled" in per_point and "python" in per_point:
        print(f"  speedup: {per_point['python'] / per_point['compiled']:.1f}x")

    print(f"full map ({args.grid}x{args.grid} grid, serial):")
    for name in backends:
        dt = bench_sweep(name, args.grid)
        rate = args.grid * args.grid / dt
        print(f"  {name:9s} {dt:6.2f} s  ({rate:,.0f} points/s)")


if __name__ == "__main__":
    main()
