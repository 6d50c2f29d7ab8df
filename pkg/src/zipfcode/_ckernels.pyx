# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; see ``_pykernels`` for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

cdef int64_t _runs(double[::1] v, double[::1] w, bint joint):
    cdef Py_ssize_t n = v.shape[0], k
    cdef int64_t total = 0, run = 1
    if n == 0:
        return 0
    for k in range(1, n):
        if v[k] == v[k - 1] and (not joint or w[k] == w[k - 1]):
            run += 1
        else:
            total += run * (run - 1) // 2
            run = 1
    total += run * (run - 1) // 2
    return total


cdef int64_t _merge_count(double[::1] a, double[::1] buf):
    cdef Py_ssize_t n = a.shape[0], width = 1, lo, mid, hi, i, j, k
    cdef int64_t swaps = 0
    cdef int passes = 0
    cdef double[::1] src = a, dst = buf, tmp
    while width < n:
        lo = 0
        while lo < n:
            mid = lo + width if lo + width < n else n
            hi = lo + 2 * width if lo + 2 * width < n else n
            i = lo
            j = mid
            k = lo
            while i < mid and j < hi:
                if src[i] <= src[j]:
                    dst[k] = src[i]
                    i += 1
                else:
                    dst[k] = src[j]
                    swaps += mid - i
                    j += 1
                k += 1
            while i < mid:
                dst[k] = src[i]
                i += 1
                k += 1
            while j < hi:
                dst[k] = src[j]
                j += 1
                k += 1
            lo += 2 * width
        tmp = src
        src = dst
        dst = tmp
        width *= 2
        passes += 1
    if passes % 2 == 1:
        a[:] = src
    return swaps


def kendall_counts(x, y):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xa = np.asarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ya = np.asarray(y, dtype=np.float64)
    cdef Py_ssize_t n = xa.shape[0]
    order = np.lexsort((ya, xa))
    cdef double[::1] xs = np.ascontiguousarray(xa[order])
    cdef double[::1] ys = np.ascontiguousarray(ya[order])
    cdef int64_t n0 = n * (n - 1) // 2
    cdef int64_t ties_x = _runs(xs, xs, False)
    cdef int64_t joint = _runs(xs, ys, True)
    cdef double[::1] buf = np.empty(n, dtype=np.float64)
    cdef int64_t swaps = _merge_count(ys, buf)
    cdef int64_t ties_y = _runs(ys, ys, False)
    return int(n0 - ties_x - ties_y + joint - 2 * swaps), int(n0), int(ties_x), int(ties_y)


def nonsingular_lengths(ranks, n_symbols):
    cdef int64_t[::1] r = np.ascontiguousarray(ranks, dtype=np.int64)
    cdef Py_ssize_t n = r.shape[0], k
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef int64_t N = n_symbols, i, below, shell, length
    cdef int64_t cap = (<int64_t>1 << 62) // N
    for k in range(n):
        i = r[k]
        length = 1
        shell = N
        below = 0
        while i - below > shell:
            below += shell
            shell = shell * N if shell <= cap else (<int64_t>1 << 62)
            length += 1
        o[k] = length
    return out
