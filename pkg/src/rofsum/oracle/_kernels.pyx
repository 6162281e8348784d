# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled oracle kernels; same functions and results as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

BACKEND = "cython"


cdef inline uint64_t _digit(uint64_t k, int m, int w, uint64_t dm) nogil:
    return (k >> (w * m)) & dm


cdef inline uint64_t _normalize1(uint64_t k, int p, int w, int M, const int64_t* inv) nogil:
    cdef uint64_t dm = (1 << w) - 1
    cdef int m
    cdef uint64_t d, s, out = 0
    if p == 2:
        return k
    for m in range(M):
        d = _digit(k, m, w, dm)
        if d:
            break
    else:
        return k
    s = <uint64_t>inv[d]
    if s == 1:
        return k
    for m in range(M):
        d = _digit(k, m, w, dm)
        if d:
            out |= ((d * s) % p) << (w * m)
    return out


cdef uint64_t _scale1(uint64_t k, uint64_t s, int p, int w, int M) nogil:
    cdef uint64_t dm = (1 << w) - 1
    cdef uint64_t d, out = 0
    cdef int m
    for m in range(M):
        d = _digit(k, m, w, dm)
        if d:
            out |= ((d * s) % p) << (w * m)
    return out


cdef inline uint64_t _sub1(uint64_t t, uint64_t k, int p, int w, int M) nogil:
    cdef uint64_t dm = (1 << w) - 1
    cdef uint64_t a, b, out = 0
    cdef int m
    if p == 2:
        return t ^ k
    for m in range(M):
        a = _digit(t, m, w, dm)
        b = _digit(k, m, w, dm)
        out |= ((a + p - b) % p) << (w * m)
    return out


cdef inline bint _member(const uint64_t[:] R, Py_ssize_t n, uint64_t x) nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if R[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo < n and R[lo] == x


def _inverses(int p):
    inv = np.zeros(max(p, 2), dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


def _u64(a):
    return np.ascontiguousarray(a, dtype=np.uint64)


def normalize(keys, int p, int w, int M):
    cdef const uint64_t[:] K = _u64(keys)
    cdef cnp.ndarray[int64_t, ndim=1] inv = _inverses(p)
    out = np.empty(K.shape[0], dtype=np.uint64)
    cdef uint64_t[:] O = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(K.shape[0]):
            O[i] = _normalize1(K[i], p, w, M, &inv[0])
    return out


def scale_all(keys, int p, int w, int M):
    cdef const uint64_t[:] K = _u64(keys)
    cdef Py_ssize_t n = K.shape[0], i
    cdef uint64_t mu
    out = np.empty(n * (p - 1), dtype=np.uint64)
    cdef uint64_t[:] O = out
    with nogil:
        for mu in range(1, p):
            for i in range(n):
                O[(mu - 1) * n + i] = _scale1(K[i], mu, p, w, M)
    return np.unique(out)


def sum_pairs(F, G, int p, int w, int M):
    cdef const uint64_t[:] A = _u64(F)
    cdef const uint64_t[:] B = _u64(G)
    cdef cnp.ndarray[int64_t, ndim=1] inv = _inverses(p)
    cdef Py_ssize_t na = A.shape[0], nb = B.shape[0], i, j, o = 0
    cdef uint64_t nu, g, f, x, y, dm = (1 << w) - 1, s
    cdef int m
    out = np.empty(na * nb * (p - 1), dtype=np.uint64)
    cdef uint64_t[:] O = out
    with nogil:
        for nu in range(1, p):
            for j in range(nb):
                g = _scale1(B[j], nu, p, w, M)
                for i in range(na):
                    f = A[i]
                    if p == 2:
                        O[o] = f ^ g
                    else:
                        s = 0
                        for m in range(M):
                            x = _digit(f, m, w, dm) + _digit(g, m, w, dm)
                            if x:
                                s |= (x % p) << (w * m)
                        O[o] = _normalize1(s, p, w, M, &inv[0])
                    o += 1
    return np.unique(out)


def product_pairs(F, G, int maskA, int maskB, int p, int w, int M):
    cdef const uint64_t[:] A = _u64(F)
    cdef const uint64_t[:] B = _u64(G)
    cdef cnp.ndarray[int64_t, ndim=1] inv = _inverses(p)
    cdef Py_ssize_t na = A.shape[0], nb = B.shape[0], i, j, o = 0
    cdef uint64_t f, g, dm = (1 << w) - 1, s, fgk, c, d
    cdef int m, S = maskA | maskB
    cdef uint64_t fd[64]
    cdef uint64_t gd[64]
    cdef uint64_t fg[64]
    out = np.empty(na * nb * p * p, dtype=np.uint64)
    cdef uint64_t[:] O = out
    with nogil:
        for i in range(na):
            f = A[i]
            for m in range(M):
                fd[m] = _digit(f, m, w, dm)
            for j in range(nb):
                g = B[j]
                for m in range(M):
                    gd[m] = _digit(g, m, w, dm)
                for m in range(M):
                    if m & ~S:
                        fg[m] = 0
                    else:
                        fg[m] = fd[m & maskA] * gd[m & maskB]
                for d in range(p):
                    for c in range(p):
                        s = 0
                        for m in range(M):
                            fgk = (fg[m] + d * fd[m] + c * gd[m]) % p
                            if fgk:
                                s |= fgk << (w * m)
                        O[o] = _normalize1(s, p, w, M, &inv[0])
                        o += 1
    return np.unique(out)


def sub_from(uint64_t t, keys, int p, int w, int M):
    cdef const uint64_t[:] K = _u64(keys)
    out = np.empty(K.shape[0], dtype=np.uint64)
    cdef uint64_t[:] O = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(K.shape[0]):
            O[i] = _sub1(t, K[i], p, w, M)
    return out


def find_sum2(R, uint64_t t, int p, int w, int M):
    cdef const uint64_t[:] K = _u64(R)
    cdef Py_ssize_t n = K.shape[0], i, hit = -1
    with nogil:
        for i in range(n):
            if _member(K, n, _sub1(t, K[i], p, w, M)):
                hit = i
                break
    return hit


def contains(R, uint64_t t):
    cdef const uint64_t[:] K = _u64(R)
    return bool(_member(K, K.shape[0], t))
