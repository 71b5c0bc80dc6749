"""Compiled vs pure-Python kernels on the scans that dominate claim runs.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from skewring import kernels
from skewring.skew import _pack, all_polynomials, find_idempotents_bounded, truncated_skew_ring
from skewring.zoo import registry_entry


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    ex1 = registry_entry("ex1")
    T = truncated_skew_ring(ex1.ring, ex1.sigma, 2)        # order 256
    yield "assoc scan, order 256", lambda k: k.first_assoc_violation(T.mul_table)
    yield "left distrib scan, order 256", lambda k: k.first_distrib_violation(T.add_table, T.mul_table, True)
    idx = np.arange(T.order, dtype=np.int32)
    yield "sandwich matrix, order 256", lambda k: k.sandwich_matrix(T.mul_table, T.zero, idx, idx)

    m2 = registry_entry("m2z2")
    R, s = m2.ring, m2.sigma
    E = find_idempotents_bounded(R, s, 2)
    F = list(all_polynomials(R, s, 2))
    Em, elen, Le = _pack(E)
    Fm, flen, _ = _pack(F)
    kc = s.preperiod + s.period
    sp = s.power_table(Le + kc - 1)
    yield f"skew sandwich grid, {len(E)} x {len(F)}", \
        lambda k: k.skew_sandwich_grid(R.mul_table, R.add_table, R.zero, sp, Em, elen, Fm, flen, kc)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = kernels.backends()
    names = sorted(impls)
    print(f"{'case':40s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in cases():
        times, outs = [], []
        for n in names:
            t, out = timed(lambda: fn(impls[n]), args.repeat)
            times.append(t)
            outs.append(out)
        if len(outs) > 1:
            same = all(np.array_equal(np.asarray(outs[0], dtype=object), np.asarray(o, dtype=object)) for o in outs)
            assert same, f"backends disagree on {label}"
        row = f"{label:40s}" + "".join(f"{t * 1000:10.1f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[names.index('python')] / times[names.index('cython')]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
