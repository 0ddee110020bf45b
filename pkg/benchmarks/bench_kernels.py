#!/usr/bin/env python3
"""Time the oracle's edge-subset enumeration: native kernel vs pure Python.

    python benchmarks/bench_kernels.py [--max-edges 18] [--reps 3] [--csv out.csv]
"""
import argparse
import csv
import sys
import time
from fractions import Fraction

from kforest import _kernels
from kforest.instance_io import GeneratorSpec, generate
from kforest.oracle import removal_profile


def instances(max_edges):
    seed = 1
    for n_edges in range(8, max_edges + 1, 2):
        while True:
            inst = generate(GeneratorSpec("random_gnp", n=8, m=4, k=1, seed=seed, edge_prob=Fraction(1, 2)))
            seed += 1
            if len(inst.edges) >= n_edges:
                yield inst.__class__(inst.graph.__class__(inst.n, inst.edges[:n_edges]), inst.demands, inst.k)
                break


def best_time(fn, reps):
    best = None
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--max-edges", type=int, default=18)
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--csv")
    args = ap.parse_args()

    native = _kernels.native_enumerate_profile
    if native is None:
        print("native kernel not built; only the Python fallback will be timed", file=sys.stderr)
    rows = []
    print("%6s %12s %12s %8s" % ("edges", "python_s", "native_s", "speedup"))
    for inst in instances(args.max_edges):
        py = best_time(lambda: removal_profile(inst, cap=64, kernel=_kernels.python_enumerate_profile), args.reps)
        nat = None
        if native is not None:
            nat = best_time(lambda: removal_profile(inst, cap=64, kernel=native), args.reps)
            assert removal_profile(inst, cap=64, kernel=native) == \
                removal_profile(inst, cap=64, kernel=_kernels.python_enumerate_profile)
        speed = py / nat if nat else float("nan")
        print("%6d %12.4f %12s %8.1f" % (len(inst.edges), py, "%.4f" % nat if nat else "-", speed))
        rows.append({"edges": len(inst.edges), "python_s": py, "native_s": nat, "speedup": speed})
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            w = csv.DictWriter(f, fieldnames=["edges", "python_s", "native_s", "speedup"])
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    main()
