"""Benchmark the compiled kernels against the pure-numpy fallback.

Usage:  python benchmarks/bench_kernels.py [--repeat N]

Imports both kernel modules directly (no environment juggling) and times
the three hot paths on representative workloads: the small eigensolver,
full see-saw minimizations, and a dense product-state grid scan.  Values
are cross-checked between backends before timing.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from hdmkit import _kernels_py, catalog, positivity
from hdmkit.rand import haar_state, random_hermitian

try:
    from hdmkit import _kernels_c
except ImportError:
    _kernels_c = None


def timed(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_eigh(kernels, mats):
    def work():
        for m in mats:
            kernels.eigh_small(m)
    return work


def bench_seesaw(kernels, h4, starts):
    def work():
        for beta0 in starts:
            kernels.seesaw_run(h4, beta0, 500, 1e-12)
    return work


def bench_grid(kernels, h4, states_a, states_b):
    def work():
        kernels.pairwise_product_min(h4, states_a, states_b)
    return work


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _kernels_c is None:
        print("compiled kernels are not built; nothing to compare")
        return 1

    rng = np.random.default_rng(0)

    # workload 1: 2000 eigensolves of random 3x3 Hermitian matrices
    mats = [random_hermitian(3, rng) for _ in range(2000)]

    # workload 2: 64 see-saw restarts on the dimension-3 reduction map
    h4 = np.ascontiguousarray(catalog.reduction_choi(3).mat.reshape(3, 3, 3, 3))
    starts = [haar_state(3, rng) for _ in range(64)]

    # workload 3: dense real-vector grid scan of the Tiles projector
    proj = catalog.upb_projector(catalog.tiles_upb())
    p4 = np.ascontiguousarray(proj.reshape(3, 3, 3, 3))
    states = positivity._real_states(3, 60, 60)

    # agreement check before timing
    v_c = _kernels_c.pairwise_product_min(p4, states, states)[0]
    v_p = _kernels_py.pairwise_product_min(p4, states, states)[0]
    assert abs(v_c - v_p) < 1e-9, "backends disagree on the grid scan"
    s_c = _kernels_c.seesaw_run(h4, starts[0], 500, 1e-12)[0]
    s_p = _kernels_py.seesaw_run(h4, starts[0], 500, 1e-12)[0]
    assert abs(s_c - s_p) < 1e-9, "backends disagree on the see-saw"

    workloads = [
        ("eigh_small 3x3 x2000", bench_eigh(_kernels_c, mats),
         bench_eigh(_kernels_py, mats)),
        ("seesaw reduction(3) x64", bench_seesaw(_kernels_c, h4, starts),
         bench_seesaw(_kernels_py, h4, starts)),
        ("grid scan 3600x3600", bench_grid(_kernels_c, p4, states, states),
         bench_grid(_kernels_py, p4, states, states)),
    ]

    print(f"{'workload':<28}{'compiled':>12}{'python':>12}{'speedup':>10}")
    for name, c_fn, p_fn in workloads:
        t_c = timed(c_fn, args.repeat)
        t_p = timed(p_fn, args.repeat)
        print(f"{name:<28}{t_c:>10.4f}s{t_p:>10.4f}s{t_p / t_c:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
