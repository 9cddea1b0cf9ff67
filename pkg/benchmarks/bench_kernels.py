"""Benchmark the numba search/parity kernels against the numpy fallback.

Three workloads: a node-capped exhaustive search that thrashes the
backtracker, an invariance-restricted refutation, and bulk digit-parity
evaluation. Each runs on both kernels; outcomes are asserted identical
before any timing is reported.

Usage: python benchmarks/bench_kernels.py [--nodes N] [--values N] [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from conformist import (
    SearchLimits,
    ball,
    complete_search,
    conformist_spec,
    cyclic_table,
    digit_one_parity,
    invariant_search,
    transfer_generators,
)
from conformist._kernels import available_kernels, digit_parity_bulk


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_capped_search(kernel: str, node_cap: int) -> tuple[float, tuple]:
    table = cyclic_table(3)
    spec = conformist_spec(table)
    domain = ball(table, 4)
    limits = SearchLimits(node_cap=node_cap, kernel=kernel)

    outcome = complete_search(spec, domain, limits=limits)
    stats = (outcome.status, outcome.nodes, outcome.max_depth)
    elapsed = _time(lambda: complete_search(spec, domain, limits=limits), repeat=1)
    return elapsed, stats


def bench_invariant_refutation(kernel: str, repeat: int) -> tuple[float, tuple]:
    table = cyclic_table(3)
    spec = conformist_spec(table)
    domain = ball(table, 3)
    gens = transfer_generators(table, 2, span=5)
    limits = SearchLimits(kernel=kernel)

    outcome = invariant_search(spec, gens, domain, limits=limits)
    stats = (outcome.status, outcome.nodes, outcome.max_depth)
    elapsed = _time(lambda: invariant_search(spec, gens, domain, limits=limits), repeat)
    return elapsed, stats


def bench_bulk_parity(kernel: str, count: int, repeat: int) -> tuple[float, tuple]:
    rng = np.random.default_rng(7)
    values = rng.integers(0, 2**40, size=count, dtype=np.int64)
    out = digit_parity_bulk(values, 3, kernel=kernel)
    sample = values[:: max(1, count // 1000)]
    expect = [digit_one_parity(int(n), 3) for n in sample]
    assert list(digit_parity_bulk(sample, 3, kernel=kernel)) == expect
    stats = (int(out.sum()),)
    elapsed = _time(lambda: digit_parity_bulk(values, 3, kernel=kernel), repeat)
    return elapsed, stats


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=200_000, help="search node cap")
    parser.add_argument("--values", type=int, default=10**7, help="bulk parity input size")
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions (best-of)")
    args = parser.parse_args()

    kernels = available_kernels()
    if "numba" in kernels:
        # compile outside the timed region
        bench_bulk_parity("numba", 64, repeat=1)
        bench_invariant_refutation("numba", repeat=1)

    workloads = [
        ("capped search", lambda k: bench_capped_search(k, args.nodes)),
        ("invariant refutation", lambda k: bench_invariant_refutation(k, args.repeat)),
        ("bulk parity", lambda k: bench_bulk_parity(k, args.values, args.repeat)),
    ]

    print(f"kernels available: {', '.join(kernels)}")
    print(f"{'workload':<22} {'python':>10} {'numba':>10} {'speedup':>8}")
    for name, runner in workloads:
        times = {}
        stats = {}
        for kernel in kernels:
            times[kernel], stats[kernel] = runner(kernel)
        if len(set(stats.values())) != 1:
            raise SystemExit(f"{name}: kernels disagree: {stats}")
        python_s = times.get("python", float("nan"))
        numba_s = times.get("numba", float("nan"))
        speedup = python_s / numba_s if "numba" in times else float("nan")
        print(f"{name:<22} {python_s:>9.3f}s {numba_s:>9.3f}s {speedup:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
