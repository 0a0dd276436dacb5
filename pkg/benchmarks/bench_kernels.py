"""Time the compiled subset DP against its pure-Python twin.

    python benchmarks/bench_kernels.py [--sizes 10 12 14] [--repeat 3]

Both kernels get the same containment table; results are checked equal.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mintile import _pycore
from mintile.generators import random_instance

try:
    from mintile import _core
except ImportError:
    _core = None


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[8, 10, 12, 14])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    if _core is None:
        print("compiled kernel not built; only the Python kernel is available")
    print(f"{'n':>3} {'evaluations':>13} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.sizes:
        inst = random_instance(n, 2 * n, max(1, n // 3), args.seed)
        table = _pycore.containment_table(n, inst.maximal_scenarios)
        t_py, r_py = best_of(lambda: _pycore.subset_dp(n, table), args.repeat)
        if _core is not None:
            t_cy, r_cy = best_of(lambda: _core.subset_dp(n, table), args.repeat)
            assert np.array_equal(np.asarray(r_py[0]), np.asarray(r_cy[0]))
            assert int(r_py[2]) == int(r_cy[2])
            print(f"{n:>3} {int(r_py[2]):>13,} {t_py:>10.4f} {t_cy:>10.4f} {t_py / max(t_cy, 1e-9):>7.0f}x")
        else:
            print(f"{n:>3} {int(r_py[2]):>13,} {t_py:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
