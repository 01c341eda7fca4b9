#!/usr/bin/env python3
"""Compare the numba and numpy Monte Carlo reduction backends.

Runs the same uniform blocks through both implementations and reports
throughput plus the largest cross-backend discrepancy.  Usage:

    python benchmarks/bench_kernels.py [--trials N] [--repeats R]
"""

import argparse
import time

import numpy as np

from secrelay import kernels
from secrelay.fading import params_from_db, trial_stream, DRAWS_PER_TRIAL


def run(backend, u, rates, gamma_th, rho, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = kernels.reduce_trials(u, rates, gamma_th, rho, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=2_000_000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    p = params_from_db(0.0, 3.0, 3.0, 10.0, 10.0, 3.0, 1.0)
    rates = (p.beta_sd, p.beta_sr, p.beta_rd, p.alpha_se, p.alpha_re)
    u = trial_stream(0).random((args.trials, DRAWS_PER_TRIAL))

    t_np, out_np = run("numpy", u, rates, p.gamma_th, p.rho, args.repeats)
    rows = [("numpy", t_np)]
    if kernels.HAVE_NUMBA:
        kernels.reduce_trials(u[:1000], rates, p.gamma_th, p.rho, backend="numba")  # JIT warmup
        t_nb, out_nb = run("numba", u, rates, p.gamma_th, p.rho, args.repeats)
        rows.append(("numba", t_nb))
        worst = max(
            float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1.0)))
            for a, b in zip(out_np, out_nb)
        )
        print(f"largest relative cross-backend tally difference: {worst:.3e}")
    else:
        print("numba not installed; benchmarking numpy only")

    print(f"{'backend':8s}  {'time':>9s}  {'trials/s':>12s}")
    for name, t in rows:
        print(f"{name:8s}  {t:8.4f}s  {args.trials / t:12.3e}")
    if len(rows) == 2:
        print(f"speedup numba/numpy: {rows[0][1] / rows[1][1]:.2f}x")


if __name__ == "__main__":
    main()
