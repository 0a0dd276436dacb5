"""Turn a feasible tileset into a forest tileset of no larger size."""

from __future__ import annotations

from .errors import InfeasibleInput
from .feasibility import is_feasible
from .model import Instance, Tileset, tileset_graph


def canonicalize(ts: Tileset, inst: Instance) -> Tileset:
    """Return a feasible tileset with ``|result| <= |ts|`` whose graph is a forest.

    All vertices of cyclic components are gathered into one set ``C`` whose
    edges are replaced by a single cycle through ``C`` in ascending order.
    If that cycle is the only component, its first edge is dropped.
    Otherwise the cycle edge ``{c0, c1}`` is swapped for ``{c0, t}`` where
    ``t`` is the lowest vertex of any tree component, which joins the two.

    Raises:
        InfeasibleInput: ``ts`` is not feasible for ``inst``.
    """
    verdict = is_feasible(ts, inst)
    if not verdict.feasible:
        raise InfeasibleInput(f"tileset is infeasible for scenario {verdict.failing_scenario}")
    g = tileset_graph(ts, inst.n)
    if g.is_forest:
        return ts

    cyclic = g.cyclic_components()
    cycle_vertices = sorted(v for comp in cyclic for v in comp)
    in_cycle = set(cycle_vertices)
    kept = [(a, b) for a, b in ts if a not in in_cycle]

    r = len(cycle_vertices)
    cycle = [(cycle_vertices[i], cycle_vertices[(i + 1) % r]) for i in range(r)]
    trees = [c for c in g.tree_components() if c[0] not in in_cycle]
    # every symbol occurs in some scenario, so a feasible tileset has no
    # isolated vertices and any tree component carries at least one edge
    c0 = cycle_vertices[0]
    if not trees:
        cycle = cycle[1:]
    else:
        target = min(c[0] for c in trees)
        cycle = cycle[1:] + [(c0, target)]
    return Tileset(kept + cycle)
