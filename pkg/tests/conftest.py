"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's fast paths: they apply
sigma by iterating its map instead of using power tables, and they multiply
with plain loops over the Cayley tables.
"""
import itertools

import numpy as np
import pytest

from skewring.zoo import REGISTRY_NAMES, registry_entry


@pytest.fixture(params=REGISTRY_NAMES)
def entry(request):
    return registry_entry(request.param)


def sigma_iter(sigma_map, a, times):
    for _ in range(times):
        a = sigma_map[a]
    return a


def oracle_mul(R, sigma, f, g):
    """Skew product of coefficient lists by the defining rule x r = sigma(r) x."""
    M, A = R.mul_table, R.add_table
    smap = np.asarray(sigma.map)
    if not f or not g:
        return ()
    out = [R.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = int(A[out[i + j], M[a, sigma_iter(smap, b, i)]])
    while out and out[-1] == R.zero:
        out.pop()
    return tuple(out)


def oracle_sandwich_rows(R, sigma, e, F, K):
    """For each f in F: the first (b, k) with k <= K and e*(b x^k)*f != 0, else None.

    Vectorised over F.  Degree bound K is taken well past the sigma cycle so
    the answer does not lean on the cycle argument used by the library.
    """
    M, A = R.mul_table, R.add_table
    smap = np.asarray(sigma.map)
    Lf = max([len(f) for f in F] + [1])
    Fm = np.full((len(F), Lf), R.zero, dtype=np.int64)
    for r, f in enumerate(F):
        Fm[r, : len(f)] = f
    found = [None] * len(F)
    for b in range(R.order):
        for k in range(K + 1):
            eg = oracle_mul(R, sigma, e, (R.zero,) * k + (b,))
            if not eg:
                continue
            # (eg) * f, coefficientwise over all f at once
            width = len(eg) + Lf - 1
            out = np.full((len(F), width), R.zero, dtype=np.int64)
            for i, a in enumerate(eg):
                tw = Fm.copy()
                for _ in range(i):
                    tw = smap[tw]
                out[:, i:i + Lf] = A[out[:, i:i + Lf], M[a, tw]]
            nonzero = (out != R.zero).any(axis=1)
            for q in np.flatnonzero(nonzero):
                if found[q] is None:
                    found[q] = (b, k)
    return found


def all_coeff_tuples(R, d):
    for cs in itertools.product(range(R.order), repeat=d + 1):
        cs = list(cs)
        while cs and cs[-1] == R.zero:
            cs.pop()
        yield tuple(cs)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
