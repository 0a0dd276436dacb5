"""Exact optimum: subset dynamic program and a brute-force partition oracle.

A forest tileset is feasible iff none of its components lies inside a
scenario, so an optimal tileset corresponds to a partition of the symbols
into as many admissible parts as possible; ``OPT = |F| - max parts``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from . import kernels
from .errors import InstanceError, NotAForest, SingletonPart, UniverseTooLarge
from .model import Instance, Tileset, bits, mask_of, tileset_graph

DP_CAP = 24
BRUTE_CAP = 8
_DP_HARD_LIMIT = 31


@dataclass(frozen=True)
class Partition:
    """Disjoint non-empty parts, each an ascending tuple, sorted by first element."""

    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for p in self.parts:
            if not p:
                raise ValueError("partition parts must be non-empty")
            if seen.intersection(p):
                raise ValueError("partition parts overlap")
            seen.update(p)

    @classmethod
    def of(cls, parts) -> "Partition":
        return cls(tuple(sorted(tuple(sorted(p)) for p in parts)))

    @classmethod
    def from_masks(cls, masks) -> "Partition":
        return cls.of(bits(m) for m in masks)

    def __len__(self) -> int:
        return len(self.parts)

    def covers(self, n: int) -> bool:
        return sorted(v for p in self.parts for v in p) == list(range(n))

    def is_admissible(self, inst: Instance) -> bool:
        return self.covers(inst.n) and not any(inst.is_contained(mask_of(p)) for p in self.parts)

    def to_obj(self, inst: Instance) -> list[list[str]]:
        return [[inst.symbols[v] for v in p] for p in self.parts]


@dataclass
class DpTable:
    """Filled table: ``best[D]`` is -1 for contained D, else the max part count."""

    n: int
    best: np.ndarray
    parent: np.ndarray
    evaluations: int
    visited: int

    def value(self, mask: int) -> float:
        v = int(self.best[mask])
        return float("-inf") if v < 0 else v

    def witness(self, mask: int) -> list[int]:
        out = []
        stack = [mask]
        while stack:
            d = stack.pop()
            sub = int(self.parent[d])
            if sub == 0:
                out.append(d)
            else:
                stack.extend((sub, d ^ sub))
        return out


class ExactSolution(NamedTuple):
    opt: int
    partition: Partition
    tileset: Tileset


def _require_plain(inst: Instance) -> None:
    if inst.generalized:
        raise InstanceError("exact solvers handle plain scenarios only; use the Hall ILP")


def build_table(inst: Instance, cap: int = DP_CAP) -> DpTable:
    _require_plain(inst)
    if inst.n > min(cap, _DP_HARD_LIMIT):
        raise UniverseTooLarge(inst.n, min(cap, _DP_HARD_LIMIT))
    contained = kernels.containment_table(inst.n, inst.maximal_scenarios)
    best, parent, evaluations, visited = kernels.subset_dp(inst.n, contained)
    return DpTable(inst.n, best, parent, int(evaluations), int(visited))


def solve_dp(inst: Instance, cap: int = DP_CAP) -> ExactSolution:
    """Optimum via the subset recurrence over all ``D ⊆ F``.

    ``M(D)`` is -inf when D lies inside a scenario, otherwise the best of
    the one-part partition and every split ``D' ∪ (D \\ D')`` with
    ``2 <= |D'| <= |D|/2``.  Ties go to the lowest ``D'`` in mask order.

    Raises:
        UniverseTooLarge: ``|F|`` exceeds ``cap``.
    """
    table = build_table(inst, cap)
    return solution_from_table(inst, table)


def solution_from_table(inst: Instance, table: DpTable) -> ExactSolution:
    full = inst.full_mask
    top = int(table.best[full])
    # F itself is never a scenario, so the one-part partition is always admissible
    assert top >= 1, "M(F) must be finite"
    part = Partition.from_masks(table.witness(full))
    return ExactSolution(inst.n - top, part, partition_to_tileset(part))


def set_partitions(n: int) -> Iterator[list[list[int]]]:
    """All set partitions of ``range(n)`` via restricted growth strings."""
    if n == 0:
        yield []
        return
    rgs = [0] * n
    maxes = [0] * n

    def emit():
        parts: list[list[int]] = [[] for _ in range(max(rgs) + 1)]
        for v, b in enumerate(rgs):
            parts[b].append(v)
        return parts

    yield emit()
    while True:
        i = n - 1
        while i > 0 and rgs[i] > maxes[i - 1]:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        for j in range(i + 1, n):
            rgs[j] = 0
        for j in range(i, n):
            maxes[j] = max(maxes[j - 1], rgs[j])
        yield emit()


def solve_bruteforce(inst: Instance, cap: int = BRUTE_CAP) -> tuple[int, Partition]:
    """Reference optimum by enumerating every set partition of F."""
    _require_plain(inst)
    if inst.n > cap:
        raise UniverseTooLarge(inst.n, cap)
    best: list[list[int]] | None = None
    for parts in set_partitions(inst.n):
        if best is not None and len(parts) <= len(best):
            continue
        if any(len(p) < 2 or inst.is_contained(mask_of(p)) for p in parts):
            continue
        best = parts
    assert best is not None
    return inst.n - len(best), Partition.of(best)


def partition_to_tileset(p: Partition) -> Tileset:
    """Each part becomes a star rooted at its lowest symbol."""
    tiles = []
    for part in p.parts:
        if len(part) < 2:
            raise SingletonPart(f"part {part} has a single symbol")
        root = part[0]
        tiles.extend((root, v) for v in part[1:])
    return Tileset(tiles)


def tileset_to_partition(ts: Tileset, n: int | None = None) -> Partition:
    """Connected components of a forest tileset (isolated vertices become singletons)."""
    g = tileset_graph(ts, ts.max_symbol() + 1 if n is None else n)
    if not g.is_forest:
        raise NotAForest("tileset graph contains a cycle or parallel edges")
    return Partition.of(g.components())
