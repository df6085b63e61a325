#!/usr/bin/env python3
"""
Benchmark the propagation hot loop: compiled extension vs NumPy fallback.

Times the cumulative-transmission march and the per-snapshot channel
application over growing grids, roughly one kernel invocation per probe
frequency of a sweep.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import math
import time

import numpy as np

from odsim.kernels import get_backend

SIZES = [(2_000, 8), (20_000, 32), (200_000, 64)]
QUICK_SIZES = [(2_000, 4), (20_000, 8)]


def _inputs(n_slices, rng):
    detunings = np.ascontiguousarray(np.linspace(-10.0, 10.0, n_slices))
    a = rng.normal(size=(4, 4))
    cov = np.ascontiguousarray(0.5 * np.eye(4) + 0.5 * a @ a.T)
    mean = np.ascontiguousarray(rng.normal(size=4))
    return detunings, cov, mean


def _time_sweep(mod, detunings, cov, mean, n_omegas, repeats=3):
    kappa, gamma, dz = 100.0, 1.0, 1.0 / len(detunings)
    omegas = np.linspace(0.0, 3.0, n_omegas)
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        for omega in omegas:
            taus = mod.slice_transmissions(kappa, gamma, dz, float(omega), detunings)
            mod.loss_snapshots(cov, mean, True, taus)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller grids, fewer repeats")
    args = parser.parse_args()

    python_mod = get_backend("python")
    compiled_mod = get_backend("compiled")
    rng = np.random.default_rng(1)

    print(f"{'slices':>9} {'omegas':>7} {'python [ms]':>12} {'compiled [ms]':>14} {'speedup':>8}")
    for n_slices, n_omegas in QUICK_SIZES if args.quick else SIZES:
        detunings, cov, mean = _inputs(n_slices, rng)
        t_py = _time_sweep(python_mod, detunings, cov, mean, n_omegas)
        if compiled_mod is None:
            print(f"{n_slices:>9} {n_omegas:>7} {1e3 * t_py:>12.2f} {'not built':>14} {'-':>8}")
            continue
        t_c = _time_sweep(compiled_mod, detunings, cov, mean, n_omegas)
        print(
            f"{n_slices:>9} {n_omegas:>7} {1e3 * t_py:>12.2f} {1e3 * t_c:>14.2f} "
            f"{t_py / t_c:>7.1f}x"
        )
    if compiled_mod is None:
        print("compiled kernel missing; build with `pip install -e . --no-build-isolation`")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
