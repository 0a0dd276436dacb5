"""4/3-approximation: matched pairs, greedy admissible triples, star completion.

The output graph is a forest whose components are never inside a scenario,
which makes it feasible.  Pairs come from a maximum matching over the
admissible pairs, triples are packed greedily in lexicographic order among
the unmatched symbols, and every symbol still uncovered is attached to a
single root symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import InstanceError
from .matching import max_cardinality_matching
from .model import Instance, Tile, Tileset, bits, mask_of


@dataclass(frozen=True)
class AdmissibleFamily:
    """Sets of one size (2 or 3), none of which lies inside a scenario."""

    order: int
    sets: tuple[tuple[int, ...], ...]


def _cooccurrence(inst: Instance) -> list[int]:
    co = [0] * inst.n
    for s in inst.maximal_scenarios:
        for v in bits(s):
            co[v] |= s
    return co


def admissible_pairs(inst: Instance, over: int | None = None) -> AdmissibleFamily:
    """All 2-subsets of ``over`` (default: F) not contained in any scenario."""
    members = bits(inst.full_mask if over is None else over)
    co = _cooccurrence(inst)
    pairs = tuple((a, b) for a, b in combinations(members, 2) if not co[a] >> b & 1)
    return AdmissibleFamily(2, pairs)


def max_matching_pairs(fam: AdmissibleFamily) -> list[Tile]:
    if fam.order != 2:
        raise ValueError("matching needs a family of pairs")
    if not fam.sets:
        return []
    n = max(b for _, b in fam.sets) + 1
    return max_cardinality_matching(n, fam.sets)


def greedy_triple_packing(inst: Instance, leftover: int | list[int]) -> list[tuple[int, int, int]]:
    """Maximal packing of admissible triples, lexicographically smallest first.

    Triples rejected earlier stay inadmissible as symbols are removed, so a
    single lexicographic pass that skips triples touching used symbols
    yields the same packing as restarting the scan after every pick.
    """
    remaining = bits(leftover) if isinstance(leftover, int) else sorted(leftover)
    co = _cooccurrence(inst)
    used = set()
    packing = []
    for t in combinations(remaining, 3):
        if used.intersection(t):
            continue
        a, b, c = t
        # a pair never seen together in a scenario makes the triple admissible
        fast = not co[a] >> b & 1 or not co[a] >> c & 1 or not co[b] >> c & 1
        if fast or not inst.is_contained(mask_of(t)):
            packing.append(t)
            used.update(t)
    free = [v for v in remaining if v not in used]
    assert not any(not inst.is_contained(mask_of(t)) for t in combinations(free, 3)), \
        "greedy packing is not maximal"
    return packing


@dataclass(frozen=True)
class ApproxRun:
    pairs: tuple[Tile, ...]
    triples: tuple[tuple[int, int, int], ...]
    root: int
    star: tuple[Tile, ...]

    @property
    def tileset(self) -> Tileset:
        tiles = list(self.pairs)
        for f1, f2, f3 in self.triples:
            tiles += [(f1, f2), (f2, f3)]
        tiles += self.star
        return Tileset(tiles)


def run_approximation(inst: Instance) -> ApproxRun:
    if inst.generalized:
        raise InstanceError("the approximation handles plain scenarios only")
    pairs = max_matching_pairs(admissible_pairs(inst))
    covered = mask_of(v for p in pairs for v in p)
    triples = greedy_triple_packing(inst, inst.full_mask & ~covered)
    covered |= mask_of(v for t in triples for v in t)
    root = bits(covered)[0] if covered else 0
    star = tuple((min(f, root), max(f, root)) for f in bits(inst.full_mask & ~covered) if f != root)
    return ApproxRun(tuple(pairs), tuple(triples), root, star)


def approximate(inst: Instance) -> Tileset:
    """Feasible forest tileset of size at most 4/3 times the optimum."""
    return run_approximation(inst).tileset
