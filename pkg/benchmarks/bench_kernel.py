"""Time the compiled and pure-Python simulation kernels on the same work.

    python benchmarks/bench_kernel.py [--runs 200] [--points 4]

Both kernels consume identical draws, so their outputs are also compared.
"""
import argparse
import time

import numpy as np

from syllab.behavior import ParameterGrid
from syllab.mreasoner import KERNELS, simulate
from syllab.oracle import default_oracle


def run(kernel, points, ids, n_runs, seed):
    codes = []
    t0 = time.perf_counter()
    for gi, p in enumerate(points):
        for si, sid in enumerate(ids):
            c, _ = simulate(sid, p, n_runs, np.random.default_rng([seed, gi, si]), kernel=kernel)
            codes.append(c)
    return time.perf_counter() - t0, np.concatenate(codes)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--runs", type=int, default=200)
    ap.add_argument("--points", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    grid = ParameterGrid((2.0, 4.5), (0.0, 0.6), (0.0, 0.9), (0.0, 0.9)).points()[: args.points]
    ids = default_oracle().valid_ids
    n_calls = len(grid) * len(ids) * args.runs
    results = {}
    for name in sorted(KERNELS):
        secs, codes = run(name, grid, ids, args.runs, args.seed)
        results[name] = codes
        print(f"{name:>9}: {secs:8.3f} s  ({n_calls / secs:,.0f} responses/s)")
    if len(results) == 2:
        same = np.array_equal(results["compiled"], results["python"])
        print(f"outputs identical: {same}")
    else:
        print("compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
