"""Tileset feasibility: matching certificates, orientations, forest test."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import NotAForest
from .matching import bipartite_matching
from .model import GeneralizedScenario, Instance, Tile, Tileset, bits, tileset_graph


@dataclass(frozen=True)
class ScenarioCertificate:
    """Injective assignment of scenario symbols to tile copies.

    ``assignment`` holds ``(symbol, tile, copy)`` triples; for generalized
    scenarios a symbol appears once per demanded copy.
    """

    scenario: int
    assignment: tuple[tuple[int, Tile, int], ...]

    def validate(self, ts: Tileset, demand: dict[int, int]) -> bool:
        used = set()
        got: dict[int, int] = {}
        for sym, tile, copy in self.assignment:
            if sym not in tile or not 0 <= copy < ts.multiplicity(tile):
                return False
            if (tile, copy) in used:
                return False
            used.add((tile, copy))
            got[sym] = got.get(sym, 0) + 1
        return got == demand

    def to_obj(self, inst: Instance) -> dict:
        names = inst.symbols
        return {
            "scenario": self.scenario,
            "assignment": [
                {"symbol": names[s], "tile": [names[t[0]], names[t[1]]], "copy": k}
                for s, t, k in self.assignment
            ],
        }


@dataclass(frozen=True)
class FeasibilityCertificate:
    scenarios: tuple[ScenarioCertificate, ...]

    def validate(self, ts: Tileset, inst: Instance) -> bool:
        demands = [g.as_dict() for g in inst.demand_scenarios()]
        if [c.scenario for c in self.scenarios] != list(range(len(demands))):
            return False
        return all(c.validate(ts, demands[c.scenario]) for c in self.scenarios)

    def to_obj(self, inst: Instance) -> list[dict]:
        return [c.to_obj(inst) for c in self.scenarios]


class Verdict(NamedTuple):
    feasible: bool
    certificate: FeasibilityCertificate | None
    failing_scenario: int | None


def _match_demand(ts: Tileset, demand: Iterable[tuple[int, int]]):
    occ = ts.occurrences()
    by_symbol: dict[int, list[int]] = {}
    for j, ((a, b), _) in enumerate(occ):
        by_symbol.setdefault(a, []).append(j)
        by_symbol.setdefault(b, []).append(j)
    left = []
    adj = []
    for sym, count in demand:
        for _ in range(count):
            left.append(sym)
            adj.append(by_symbol.get(sym, []))
    if len(left) > len(occ):
        return None
    match = bipartite_matching(adj, len(occ))
    if any(r == -1 for r in match):
        return None
    return tuple((sym, occ[r][0], occ[r][1]) for sym, r in zip(left, match))


def is_feasible_scenario(ts: Tileset, scenario: int | Iterable[int]):
    """Decide feasibility of ``ts`` for one scenario by bipartite matching.

    ``scenario`` is a bitmask or an iterable of symbol ids.  Returns
    ``(True, assignment)`` with ``(symbol, tile, copy)`` triples, or
    ``(False, None)``.
    """
    members = bits(scenario) if isinstance(scenario, int) else sorted(set(scenario))
    got = _match_demand(ts, ((s, 1) for s in members))
    return (got is not None, got)


def is_feasible_demand(ts: Tileset, scenario: GeneralizedScenario):
    got = _match_demand(ts, scenario.demand)
    return (got is not None, got)


def is_feasible(ts: Tileset, inst: Instance) -> Verdict:
    """Check every scenario (plain ones first, then generalized ones).

    Stops at the first infeasible scenario and reports its index.
    """
    certs = []
    for i, g in enumerate(inst.demand_scenarios()):
        got = _match_demand(ts, g.demand)
        if got is None:
            return Verdict(False, None, i)
        certs.append(ScenarioCertificate(i, got))
    return Verdict(True, FeasibilityCertificate(tuple(certs)), None)


def forest_feasible(ts: Tileset, inst: Instance) -> bool:
    """Component test for forest tilesets: no component lies inside a scenario."""
    g = tileset_graph(ts, inst.n)
    if not g.is_forest:
        raise NotAForest("tileset graph contains a cycle or parallel edges")
    return not any(inst.is_contained(c) for c in g.component_masks())


@dataclass(frozen=True)
class Orientation:
    """Head vertex for every tile copy, in ``Tileset.occurrences()`` order."""

    edges: tuple[Tile, ...]
    heads: tuple[int, ...]

    def indegree(self, n: int) -> list[int]:
        deg = [0] * n
        for h in self.heads:
            deg[h] += 1
        return deg

    def is_feasible_for(self, scenario: int, n: int) -> bool:
        deg = self.indegree(n)
        return all(deg[s] >= 1 for s in bits(scenario))


def orientation_for(ts: Tileset, scenario: int | Iterable[int]) -> Orientation | None:
    """Orientation with every scenario symbol reached, or None if infeasible.

    Matched copies point at their symbol; unmatched copies point at the
    smaller endpoint.
    """
    ok, assignment = is_feasible_scenario(ts, scenario)
    if not ok:
        return None
    target = {(t, k): s for s, t, k in assignment}
    occ = ts.occurrences()
    heads = tuple(target.get((t, k), t[0]) for t, k in occ)
    return Orientation(tuple(t for t, _ in occ), heads)
