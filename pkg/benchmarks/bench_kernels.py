#!/usr/bin/env python3
"""Measure the JIT kernels against the pure-numpy fallback.

FBCENT_NO_NUMBA is read once at import, so each configuration gets a fresh
interpreter: the script re-runs itself as a child per configuration and
collects the timings.

    python benchmarks/bench_kernels.py --nodes 20 --steps 100000
"""

import argparse
import json
import os
import subprocess
import sys
import time


def run_workload(nodes, steps, repeat):
    from feedback_centrality import (
        Family,
        GeneratorSpec,
        ProcessKind,
        generate,
        principal_eigenvalue,
        sum_series,
        total_per_step,
    )
    from feedback_centrality._kernels import NUMBA_ENABLED

    g = generate(GeneratorSpec(Family.STRONGLY_CONNECTED, size_range=(nodes, nodes), seed=7))
    alpha = 1.0 / principal_eigenvalue(g)[1]

    # the first call compiles under numba; keep it out of the timed region
    sum_series(g, ProcessKind.PARALLEL, alpha, 10)
    total_per_step(g, ProcessKind.DISTRIBUTED, 1.0, 10)

    def best(f):
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            f()
            times.append(time.perf_counter() - t0)
        return min(times)

    return {
        "jit": NUMBA_ENABLED,
        "series": best(lambda: sum_series(g, ProcessKind.PARALLEL, alpha, steps)),
        "totals": best(lambda: total_per_step(g, ProcessKind.DISTRIBUTED, 1.0, steps)),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=20)
    parser.add_argument("--steps", type=int, default=100_000)
    parser.add_argument("--repeat", type=int, default=3, help="keep the best of this many runs")
    args = parser.parse_args()

    if os.environ.get("_BENCH_CHILD"):
        print(json.dumps(run_workload(args.nodes, args.steps, args.repeat)))
        return

    rows = {}
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, _BENCH_CHILD="1", FBCENT_NO_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, __file__, *sys.argv[1:]],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        rows[label] = json.loads(proc.stdout)

    if not rows["numba"]["jit"]:
        print("note: numba unavailable, both rows ran the numpy fallback")
    print(f"{args.nodes} nodes, {args.steps} steps, best of {args.repeat}:")
    for kernel in ("series", "totals"):
        jit, plain = rows["numba"][kernel], rows["numpy"][kernel]
        print(
            f"  {kernel:8s} numba {jit * 1e3:9.2f} ms   "
            f"numpy {plain * 1e3:9.2f} ms   speedup x{plain / jit:.1f}"
        )


if __name__ == "__main__":
    main()
