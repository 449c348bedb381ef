#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the two hot paths (density evaluation on a grid, batched crossing-root
solves) plus one end-to-end moment integral per backend, and prints a small
table with speedups.

    python benchmarks/bench_backends.py [--n-pdf N] [--n-roots N] [--repeat R]
"""

import argparse
import time

import numpy as np

from toafall import available_backends, get_backend
from toafall.sampling import xi_stream

MASS = 1.6735575e-27
SIGMA0 = 1e-7
G = 9.81
HBAR = 1.054571817e-34
X = 0.1
T_C = 0.14278431229270645


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_backend(kernels, n_pdf, n_roots, repeat):
    ts = np.linspace(0.0, 3.0 * T_C, n_pdf)
    xi = xi_stream(12345, n_roots)
    results = {}
    results["pdf_batch"] = best_of(
        repeat, lambda: kernels.pdf_batch(MASS, SIGMA0, 0.0, G, HBAR, X, ts))
    results["crossing_roots"] = best_of(
        repeat, lambda: kernels.crossing_roots(MASS, SIGMA0, 0.0, G, HBAR, X,
                                               xi, T_C * 1e-12, 64))
    return results


def bench_moment(backend_name, repeat):
    import os
    import subprocess
    import sys

    # separate process so the backend selection applies cleanly at import
    code = (
        "import time\n"
        "from toafall import PhysicalParams, GaussianTrajectory, ToaDensity, moment\n"
        f"p = PhysicalParams(mass={MASS!r}, sigma0={SIGMA0!r}, v0=0.0, g={G!r})\n"
        f"d = ToaDensity(trajectory=GaussianTrajectory.free_fall(p), x={X!r})\n"
        "best = min(\n"
        f"    (lambda s: (moment(d, 1), time.perf_counter() - s)[1])(time.perf_counter())\n"
        f"    for _ in range({repeat}))\n"
        "print(best)\n"
    )
    env = dict(os.environ, TOAFALL_BACKEND=backend_name)
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-pdf", type=int, default=1_000_000,
                        help="grid size for density evaluation")
    parser.add_argument("--n-roots", type=int, default=50_000,
                        help="batch size for crossing-root solves")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    if "cython" not in backends:
        print("compiled extension not built; timing the fallback only")

    table = {}
    for name in backends:
        table[name] = bench_backend(get_backend(name), args.n_pdf,
                                    args.n_roots, args.repeat)
        table[name]["moment_integral"] = bench_moment(name, args.repeat)

    rows = ["pdf_batch", "crossing_roots", "moment_integral"]
    sizes = {"pdf_batch": f"n={args.n_pdf}",
             "crossing_roots": f"n={args.n_roots}",
             "moment_integral": "adaptive"}
    header = f"{'kernel':<18} {'size':<12}" + "".join(f"{b:>14}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for row in rows:
        line = f"{row:<18} {sizes[row]:<12}"
        for b in backends:
            line += f"{table[b][row] * 1e3:>12.2f}ms"
        if len(backends) == 2:
            line += f"{table['python'][row] / table['cython'][row]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
