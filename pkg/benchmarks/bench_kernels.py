#!/usr/bin/env python3
"""Benchmark the compiled RK4 core against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Times the raw kernel on the benchmark grid (160 steps), a full
trajectory+chain build, and one bounded least-squares start, for whichever
backends are importable.
"""

import argparse
import time

import numpy as np

import epirecon as ep
import epirecon._purepy as purepy

try:
    import epirecon._core as core
except ImportError:
    core = None

THETA = np.array([0.3, 0.25, 0.1, 0.05])
X0 = np.array([0.9, 0.1])
H = 2.0 ** -5


def time_call(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        tic = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - tic)
    return best


def bench_kernel(mod, repeats):
    def run():
        for _ in range(100):
            mod.integrate_grid(0, THETA, X0, H, 160)
    return time_call(run, repeats) / 100


def bench_calibration_start(repeats):
    model = ep.get_model("sir")
    grid = ep.GridSpec(h=H, t_max=5.0)
    traj = ep.integrate(model, THETA[:3], X0, grid)
    y = model.output_map(traj.states, THETA[:3])[:, 0]
    days = np.arange(0, 6)
    obs = np.column_stack([days.astype(float), y[(days / H).astype(int)]])
    problem = ep.CalibrationProblem(observations=obs, starts=1, seed=3)
    return time_call(lambda: ep.calibrate(problem), max(1, repeats // 3))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"active backend: {ep.BACKEND}")
    rows = []
    backends = [("pure-python", purepy)]
    if core is not None:
        backends.insert(0, ("compiled", core))
    for name, mod in backends:
        per = bench_kernel(mod, args.repeats)
        rows.append((name, per))
        print(f"{name:>12}: {per * 1e6:8.1f} us per 160-step integration "
              f"({160 / per / 1e6:6.2f} M steps/s)")
    if len(rows) == 2:
        print(f"{'speedup':>12}: {rows[1][1] / rows[0][1]:8.1f}x")
        a = core.integrate_grid(0, THETA, X0, H, 160)
        b = purepy.integrate_grid(0, THETA, X0, H, 160)
        print(f"{'max diff':>12}: {np.max(np.abs(a - b)):8.2e}")

    per = bench_calibration_start(args.repeats)
    print(f"one least-squares start ({ep.BACKEND}): {per:.2f} s")


if __name__ == "__main__":
    main()
