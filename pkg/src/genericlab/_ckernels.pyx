# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled brute-force and permutation kernels.

Same signatures and results as ``genericlab._pykernels``.
"""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


def cycle_labels(perm):
    cdef i64[::1] p = np.ascontiguousarray(perm, dtype=np.int64)
    cdef Py_ssize_t n = p.shape[0]
    out = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] lab = out
    cdef Py_ssize_t i
    cdef i64 j
    for i in range(n):
        if lab[i] >= 0:
            continue
        j = i
        while lab[j] < 0:
            lab[j] = i
            j = p[j]
    return out


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


def _image_table(i64[::1] p):
    # img[m] = img[m without its lowest bit] | bit p[lowest]
    cdef i64 size = (<i64>1) << p.shape[0]
    out = np.zeros(size, dtype=np.int64)
    cdef i64[::1] img = out
    cdef i64 m
    with nogil:
        for m in range(1, size):
            img[m] = img[m & (m - 1)] | ((<i64>1) << p[__builtin_ctzll(m)])
    return out


def _weight_table(weights):
    cdef i64[::1] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef i64 size = (<i64>1) << w.shape[0]
    out = np.zeros(size, dtype=np.int64)
    cdef i64[::1] t = out
    cdef i64 m
    with nogil:
        for m in range(1, size):
            t[m] = t[m & (m - 1)] + w[__builtin_ctzll(m)]
    return out


def max_sym_diff(perm, weights):
    cdef i64[::1] p = np.ascontiguousarray(perm, dtype=np.int64)
    cdef i64[::1] t = _weight_table(weights)
    cdef i64[::1] img = _image_table(p)
    cdef i64 size = (<i64>1) << p.shape[0]
    cdef i64 m, best = 0, v
    with nogil:
        for m in range(size):
            v = t[m ^ img[m]]
            if v > best:
                best = v
    return int(best)


def max_tower(perm, int n, weights):
    cdef i64[::1] p = np.ascontiguousarray(perm, dtype=np.int64)
    cdef i64[::1] t = _weight_table(weights)
    cdef i64[::1] img = _image_table(p)
    cdef i64 size = (<i64>1) << p.shape[0]
    cdef i64 m, cur, union, best = 0, best_mask = 0
    cdef int k
    cdef bint ok
    with nogil:
        for m in range(1, size):
            if t[m] <= best:
                continue
            union = m
            cur = m
            ok = True
            for k in range(1, n):
                cur = img[cur]
                if cur & union:
                    ok = False
                    break
                union |= cur
            if ok:
                best = t[m]
                best_mask = m
    return int(best), int(best_mask)
