"""Pure-Python twin of the compiled ``_core`` kernels (same results, slower)."""

import numpy as np


def containment_table(n, scenario_masks):
    size = 1 << n
    t = bytearray(size)
    for s in scenario_masks:
        t[s] = 1
    for i in range(n):
        bit = 1 << i
        for mask in range(size):
            if mask & bit and t[mask]:
                t[mask ^ bit] = 1
    return np.frombuffer(bytes(t), dtype=np.uint8).copy()


def subset_dp(n, contained):
    size = 1 << n
    c = bytes(np.asarray(contained, dtype=np.uint8))
    best = [-1] * size
    parent = [0] * size
    evaluations = visited = 0
    for d in range(1, size):
        if c[d]:
            continue
        k = d.bit_count()
        bestval, bestsub = 1, 0
        if k >= 4:
            half = k // 2
            sub = (d - 1) & d
            while sub:
                visited += 1
                cnt = sub.bit_count()
                if 2 <= cnt <= half:
                    evaluations += 1
                    a = best[sub]
                    if a > 0:
                        b = best[d ^ sub]
                        if b > 0 and a + b >= bestval:
                            bestval, bestsub = a + b, sub
                sub = (sub - 1) & d
        best[d] = bestval
        parent[d] = bestsub
    return (
        np.array(best, dtype=np.int8),
        np.array(parent, dtype=np.uint32),
        evaluations,
        visited,
    )
