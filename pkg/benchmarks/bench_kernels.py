#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

The workloads are the search hot paths: pair-compatibility table
construction, candidate flattening, integer row elimination and the
coding-gain Gram-determinant enumeration.  Both backends compute exactly the
same integers; the checksum column proves it on every run.

Run:  python benchmarks/bench_kernels.py [--repeats N]
The numba column includes a warm-up call so JIT compilation is not timed.
"""

import argparse
import time

import numpy as np

from gstbc import kernels
from gstbc.admissible import encode_candidates, enumerate_candidates
from gstbc.serialize import load_fixture


def workload_tables(backend, perm, quarters):
    anti = backend.anticommute_table(perm, quarters)
    acc = int(anti.sum())
    for anchor in range(0, perm.shape[0], 8):
        mid = backend.middle_table(perm, quarters, anchor)
        acc = (acc * 31 + int(mid.sum())) % (1 << 61)
    return acc


def workload_flatten(backend, perm, quarters):
    acc = 0
    for anchor in range(0, perm.shape[0], 4):
        vecs = backend.anchor_product_vectors(perm, quarters, anchor)
        acc = (acc * 31 + int(np.abs(vecs).sum())) % (1 << 61)
    return acc


def workload_elimination(backend, perm, quarters):
    flat = backend.flatten_encoded(perm, quarters)
    acc = 0
    for start in range(0, 32):
        basis = np.zeros((40, flat.shape[1]), dtype=np.int64)
        pivots = np.zeros(40, dtype=np.int64)
        nrows = 0
        for i in range(start, flat.shape[0], 3):
            if backend.reduce_row(basis, pivots, nrows, flat[i]) == 1:
                nrows += 1
        acc = (acc * 31 + nrows) % (1 << 61)
    return acc


def workload_gram(backend, wre, wim, diffs):
    acc = 0
    for _ in range(40):
        best, at = backend.min_gram_det(wre, wim, diffs)
        acc = (acc * 31 + int(best) + int(at)) % (1 << 61)
    return acc


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    cands = enumerate_candidates(2)
    perm, quarters, _, _ = encode_candidates(cands)
    code = load_fixture("rate54-2group")
    group = code.groups[0]
    wre = np.array([[[int(m.entry(r, c).re) for c in range(4)] for r in range(4)]
                    for m in group], dtype=np.int64)
    wim = np.array([[[int(m.entry(r, c).im) for c in range(4)] for r in range(4)]
                    for m in group], dtype=np.int64)
    diffs = np.array([0, 2, -2], dtype=np.int64)

    workloads = [
        ("pair tables", workload_tables, (perm, quarters)),
        ("product flatten", workload_flatten, (perm, quarters)),
        ("integer elimination", workload_elimination, (perm, quarters)),
        ("gram determinants", workload_gram, (wre, wim, diffs)),
    ]

    backends = [("numpy", kernels.get_backend("numpy")),
                ("numba", kernels.get_backend("numba"))]

    print(f"{'workload':<22} {'backend':<7} {'best of ' + str(args.repeats):>12} "
          f"{'checksum':>20}")
    speedups = []
    for name, fn, wargs in workloads:
        times = {}
        sums = {}
        for bname, backend in backends:
            fn(backend, *wargs)  # warm-up (and JIT for numba)
            best = min(_timed(fn, backend, wargs) for _ in range(args.repeats))
            times[bname] = best
            sums[bname] = fn(backend, *wargs)
            print(f"{name:<22} {bname:<7} {best * 1000:>10.1f}ms {sums[bname]:>20}")
        assert sums["numpy"] == sums["numba"], f"backend mismatch in {name}"
        speedups.append((name, times["numpy"] / times["numba"]))
    print()
    for name, s in speedups:
        print(f"numba speedup over numpy, {name}: {s:.1f}x")


def _timed(fn, backend, wargs) -> float:
    t0 = time.perf_counter()
    fn(backend, *wargs)
    return time.perf_counter() - t0


if __name__ == "__main__":
    main()
