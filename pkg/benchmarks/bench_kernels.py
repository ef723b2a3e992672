#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Micro-benchmarks time the two hot kernels directly from both backend
modules; the end-to-end section re-runs this script in a subprocess with
QFDE_PURE_PYTHON=1 so the whole package flips backend.

Usage: python benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import time

import numpy as np


def _time(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def micro():
    from qfde import _kernels_py

    backends = {"python": _kernels_py}
    try:
        from qfde import _kernels_cy

        backends["cython"] = _kernels_cy
    except ImportError:
        print("compiled backend not built; micro-benchmark covers python only")

    rng = np.random.default_rng(7)
    args = [(1.0, float(s), float(a), float(q))
            for s, a, q in zip(rng.uniform(0.05, 0.95, 300),
                               rng.uniform(-0.95, -0.05, 300),
                               rng.uniform(0.3, 0.8, 300))]

    print("== shifted_factorial_real, 300 evaluations x 20 passes")
    times = {}
    for name, mod in backends.items():
        def run(mod=mod):
            for _ in range(20):
                for t, s, a, q in args:
                    mod.shifted_factorial_real(t, s, a, q, 1e-14, 10_000)
        times[name] = _time(run)
        print(f"  {name:>7}: {times[name]*1e3:8.2f} ms")
    if len(times) == 2:
        print(f"  speedup: {times['python']/times['cython']:.1f}x")

    print("== b1_weight, 200 evaluations")
    times = {}
    for name, mod in backends.items():
        def run(mod=mod):
            for k in range(200):
                t1 = 0.9 * 0.7 ** (k % 12 + 1)
                mod.b1_weight(0.9, t1, 0.5, 0.7, 1e-14, 10_000)
        times[name] = _time(run)
        print(f"  {name:>7}: {times[name]*1e3:8.2f} ms")
    if len(times) == 2:
        print(f"  speedup: {times['python']/times['cython']:.1f}x")


def end_to_end():
    import qfde

    scale = qfde.QScale(2.0 / 3.0, 1.0)
    problem = qfde.make_problem("example2", q=scale.q)
    mesh = qfde.build_mesh(scale, 12)

    def run():
        qfde.solve_ivp(problem, scale, 12)
        for t in mesh.nodes[1:]:
            qfde.caputo_q_derivative(lambda u: u * u + 1.0, 2.0 / 3.0,
                                     float(t), scale.q)

    took = _time(run, repeat=3)
    print(f"  backend {qfde.kernel_backend():>7}: solve(N=12) + Caputo at all "
          f"nodes: {took*1e3:8.2f} ms")


if __name__ == "__main__":
    if "--end-to-end-only" in sys.argv:
        end_to_end()
        sys.exit(0)

    micro()
    print("== end to end (package-level backend switch)")
    sys.stdout.flush()
    for pure in ("0", "1"):
        env = dict(os.environ, QFDE_PURE_PYTHON=pure)
        subprocess.run([sys.executable, __file__, "--end-to-end-only"],
                       env=env, check=True)
