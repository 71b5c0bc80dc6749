# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled scan kernels.  Contracts match skewring._pykernels."""
import numpy as np


def first_assoc_violation(const int[:, ::1] op):
    cdef Py_ssize_t n = op.shape[0]
    cdef Py_ssize_t a, b, c
    cdef int ab
    for a in range(n):
        for b in range(n):
            ab = op[a, b]
            for c in range(n):
                if op[ab, c] != op[a, op[b, c]]:
                    return (a, b, c)
    return None


def first_distrib_violation(const int[:, ::1] add, const int[:, ::1] mul, bint left):
    cdef Py_ssize_t n = add.shape[0]
    cdef Py_ssize_t a, b, c
    cdef int lhs, rhs
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if left:
                    lhs = mul[a, add[b, c]]
                    rhs = add[mul[a, b], mul[a, c]]
                else:
                    lhs = mul[add[b, c], a]
                    rhs = add[mul[b, a], mul[c, a]]
                if lhs != rhs:
                    return (a, b, c)
    return None


def sandwich_matrix(const int[:, ::1] mul, int zero, lefts, rights):
    cdef int[::1] L = np.ascontiguousarray(lefts, dtype=np.int32)
    cdef int[::1] Rr = np.ascontiguousarray(rights, dtype=np.int32)
    cdef Py_ssize_t n = mul.shape[0]
    cdef Py_ssize_t P = L.shape[0], Q = Rr.shape[0]
    out_arr = np.full((P, Q), -1, dtype=np.int32)
    cdef int[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, r
    cdef int l, q
    for i in range(P):
        l = L[i]
        for j in range(Q):
            q = Rr[j]
            for r in range(n):
                if mul[mul[l, r], q] != zero:
                    out[i, j] = <int>r
                    break
    return out_arr


def skew_sandwich_grid(const int[:, ::1] mul, const int[:, ::1] add, int zero,
                       const int[:, ::1] sigpow, const int[:, ::1] E, elen_in,
                       const int[:, ::1] F, flen_in, int kcount):
    cdef int[::1] elen = np.ascontiguousarray(elen_in, dtype=np.int32)
    cdef int[::1] flen = np.ascontiguousarray(flen_in, dtype=np.int32)
    cdef Py_ssize_t n = mul.shape[0]
    cdef Py_ssize_t P = elen.shape[0], Q = flen.shape[0]
    out_arr = np.full((P, Q, 2), -1, dtype=np.int32)
    cdef int[:, :, ::1] out = out_arr
    cdef Py_ssize_t p, q, b, k, t, i, j, lo, hi
    cdef int le, lf, acc, left
    cdef bint found
    for p in range(P):
        le = elen[p]
        if le == 0:
            continue
        for q in range(Q):
            lf = flen[q]
            if lf == 0:
                continue
            found = False
            for b in range(n):
                for k in range(kcount):
                    for t in range(le + lf - 1):
                        acc = zero
                        lo = t - lf + 1
                        if lo < 0:
                            lo = 0
                        hi = t if t < le - 1 else le - 1
                        for i in range(lo, hi + 1):
                            j = t - i
                            left = mul[E[p, i], sigpow[i, b]]
                            acc = add[acc, mul[left, sigpow[i + k, F[q, j]]]]
                        if acc != zero:
                            out[p, q, 0] = <int>b
                            out[p, q, 1] = <int>k
                            found = True
                            break
                    if found:
                        break
                if found:
                    break
    return out_arr
