# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset kernels; ``_pycore`` mirrors this module line for line."""

import numpy as np

from libc.stdint cimport int8_t, int64_t, uint8_t, uint32_t


cdef extern from *:
    int __builtin_popcount(unsigned int) nogil


def containment_table(int n, scenario_masks):
    """Byte table over all subsets D of [n]: 1 iff D lies inside some scenario."""
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    out = np.zeros(size, dtype=np.uint8)
    cdef uint8_t[::1] t = out
    cdef Py_ssize_t mask, bit
    cdef int i
    for s in scenario_masks:
        t[s] = 1
    with nogil:
        for i in range(n):
            bit = (<Py_ssize_t>1) << i
            for mask in range(size):
                if (mask & bit) and t[mask]:
                    t[mask ^ bit] = 1
    return out


def subset_dp(int n, contained):
    """Fill the partition table over all subsets of [n].

    Returns ``(best, parent, evaluations, visited)``: ``best[D]`` is the
    maximum number of admissible parts of D or -1 when D is inside a
    scenario; ``parent[D]`` is the chosen split (0 for the one-part
    partition); ``evaluations`` counts split candidates that pass the size
    filter and ``visited`` every sub-mask enumerated.
    """
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef const uint8_t[::1] c = contained
    best_arr = np.empty(size, dtype=np.int8)
    parent_arr = np.zeros(size, dtype=np.uint32)
    cdef int8_t[::1] best = best_arr
    cdef uint32_t[::1] parent = parent_arr
    cdef unsigned int d, sub, bestsub
    cdef int k, half, cnt, val, bestval
    cdef int8_t a, b
    cdef int64_t evaluations = 0, visited = 0
    with nogil:
        best[0] = -1
        for d in range(1, <unsigned int>size):
            if c[d]:
                best[d] = -1
                continue
            k = __builtin_popcount(d)
            bestval = 1
            bestsub = 0
            if k >= 4:
                half = k // 2
                sub = (d - 1) & d
                while sub:
                    visited += 1
                    cnt = __builtin_popcount(sub)
                    if cnt >= 2 and cnt <= half:
                        evaluations += 1
                        a = best[sub]
                        if a > 0:
                            b = best[d ^ sub]
                            if b > 0:
                                val = a + b
                                if val >= bestval:
                                    bestval = val
                                    bestsub = sub
                    sub = (sub - 1) & d
            best[d] = <int8_t>bestval
            parent[d] = bestsub
    return best_arr, parent_arr, evaluations, visited
