"""Random and planted instance generators.

Randomness comes from numpy's counter-based Philox bit generator keyed by
the seed, so an instance depends only on ``(parameters, seed)``.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .errors import InvalidSizeBound, SizeMismatch
from .exact import Partition, partition_to_tileset
from .model import Instance, Tileset, mask_of


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _names(n: int) -> list[str]:
    return [f"s{i}" for i in range(n)]


def random_instance(n: int, m: int, max_size: int, seed: int) -> Instance:
    """``m`` scenarios drawn uniformly from the non-empty subsets of size <= ``max_size``.

    Duplicates are dropped and every symbol left uncovered gets a singleton
    scenario, so all ``n`` symbols survive normalization.
    """
    if n < 2 or not 1 <= max_size < n:
        raise InvalidSizeBound(f"need n >= 2 and 1 <= max_size < n (n={n}, max_size={max_size})")
    if m < 1:
        raise InvalidSizeBound("need at least one scenario")
    rng = make_rng(seed)
    sizes = np.arange(1, max_size + 1)
    weights = np.array([comb(n, int(s)) for s in sizes], dtype=float)
    weights /= weights.sum()
    scenarios = []
    seen = set()
    for _ in range(m):
        size = int(rng.choice(sizes, p=weights))
        members = sorted(int(v) for v in rng.choice(n, size=size, replace=False))
        key = mask_of(members)
        if key not in seen:
            seen.add(key)
            scenarios.append(members)
    covered = 0
    for sc in scenarios:
        covered |= mask_of(sc)
    scenarios.extend([v] for v in range(n) if not covered >> v & 1)
    return Instance.from_sets(n, scenarios, names=_names(n))


def planted_partition(n: int, part_sizes: list[int], seed: int) -> tuple[Instance, Tileset, int]:
    """Instance with a planted admissible partition of the given part sizes.

    Each part ``P`` contributes the scenarios ``P - {x}``, which forbid every
    proper subset of ``P`` as a part; ``n`` further random blockers take a
    random proper subset of each part.  No scenario ever contains a whole
    part, so the planted partition stays admissible and its star tileset is
    feasible with ``n - len(part_sizes)`` tiles.
    """
    if sum(part_sizes) != n or any(s < 2 for s in part_sizes):
        raise SizeMismatch(f"part sizes {part_sizes} must be >= 2 and sum to n={n}")
    rng = make_rng(seed)
    perm = [int(v) for v in rng.permutation(n)]
    parts = []
    start = 0
    for s in part_sizes:
        parts.append(sorted(perm[start:start + s]))
        start += s

    scenarios = []
    for p in parts:
        for x in p:
            scenarios.append([v for v in p if v != x])
    for _ in range(n):
        blocker = []
        for p in parts:
            k = int(rng.integers(0, len(p)))
            blocker.extend(int(v) for v in rng.choice(p, size=k, replace=False))
        if blocker:
            scenarios.append(sorted(blocker))

    inst = Instance.from_sets(n, scenarios, names=_names(n))
    ts = partition_to_tileset(Partition.of(parts))
    return inst, ts, n - len(parts)
