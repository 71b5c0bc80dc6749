"""Numpy implementations of the scan kernels.

Same contracts as the compiled ``_ckernels`` module: tables are C-contiguous
int32 arrays, witnesses are the first hit in nested ascending loop order.
"""
import numpy as np


def first_assoc_violation(op):
    op = np.asarray(op)
    n = op.shape[0]
    for a in range(n):
        row = op[a]
        lhs = op[row]            # lhs[b, c] = (a*b)*c
        rhs = row[op]            # rhs[b, c] = a*(b*c)
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            b, c = divmod(int(bad[0]), n)
            return (a, b, c)
    return None


def first_distrib_violation(add, mul, left):
    add = np.asarray(add)
    mul = np.asarray(mul)
    n = add.shape[0]
    for a in range(n):
        if left:
            ma = mul[a]
            lhs = ma[add]                        # a*(b+c)
            rhs = add[ma[:, None], ma[None, :]]  # a*b + a*c
        else:
            ma = mul[:, a]
            lhs = ma[add]                        # (b+c)*a
            rhs = add[ma[:, None], ma[None, :]]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            b, c = divmod(int(bad[0]), n)
            return (a, b, c)
    return None


def sandwich_matrix(mul, zero, lefts, rights):
    """out[i, j] = first r with lefts[i]*r*rights[j] != zero, else -1."""
    mul = np.asarray(mul)
    lefts = np.asarray(lefts, dtype=np.int64)
    rights = np.asarray(rights, dtype=np.int64)
    out = np.full((len(lefts), len(rights)), -1, dtype=np.int32)
    for i, l in enumerate(lefts):
        # l*r*q depends on r only through l*r: scan the distinct values of l*R,
        # each tagged with the first r producing it
        vals, first = np.unique(mul[l], return_index=True)
        order = np.argsort(first)
        vals, first = vals[order], first[order]
        nz = mul[np.ix_(vals, rights)] != zero
        hit = nz.any(axis=0)
        out[i, hit] = first[np.argmax(nz[:, hit], axis=0)]
    return out


def skew_sandwich_grid(mul, add, zero, sigpow, E, elen, F, flen, kcount):
    """out[p, q] = first (b, k) with E_p * (b x^k) * F_q != 0, else (-1, -1).

    Coefficient of x^(k+t) is sum_{i+j=t} E_i sigma^i(b) sigma^(i+k)(F_j).
    """
    mul = np.asarray(mul)
    add = np.asarray(add)
    sigpow = np.asarray(sigpow)
    E = np.asarray(E)
    F = np.asarray(F)
    n = mul.shape[0]
    P, Q = len(elen), len(flen)
    out = np.full((P, Q, 2), -1, dtype=np.int32)
    bs = np.arange(n)
    for p in range(P):
        le = int(elen[p])
        if le == 0:
            continue
        # fails[q, b, k]: nonzero somewhere
        for lf in np.unique(flen):
            lf = int(lf)
            if lf == 0:
                continue
            qs = np.flatnonzero(flen == lf)
            Fq = F[qs, :lf]
            bad = np.zeros((len(qs), n, kcount), dtype=bool)
            for k in range(kcount):
                for t in range(le + lf - 1):
                    acc = np.full((len(qs), n), zero, dtype=np.int64)
                    for i in range(max(0, t - lf + 1), min(t, le - 1) + 1):
                        j = t - i
                        left = mul[E[p, i], sigpow[i, bs]]            # over b
                        right = sigpow[i + k][Fq[:, j]]               # over q
                        term = mul[left[None, :], right[:, None]]     # [q, b]
                        acc = add[acc, term]
                    bad[:, :, k] |= acc != zero
            flat = bad.reshape(len(qs), -1)
            any_bad = flat.any(axis=1)
            first = np.argmax(flat, axis=1)
            for row, q in enumerate(qs):
                if any_bad[row]:
                    out[p, q] = divmod(int(first[row]), kcount)
    return out
