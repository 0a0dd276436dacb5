"""Domain types: instances, tilesets and the tileset multigraph.

Symbols are interned to dense ids ``0..n-1`` and scenarios are stored as
integer bitmasks (bit ``i`` set iff symbol ``i`` is a member).  Python ints
are arbitrary precision, so the same code path covers universes of any size.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InstanceError, ParseError

Tile = tuple[int, int]


def mask_of(members: Iterable[int]) -> int:
    mask = 0
    for m in members:
        mask |= 1 << m
    return mask


def bits(mask: int) -> list[int]:
    """Ascending list of the set bit positions of ``mask``."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _natural_key(name: str):
    parts = []
    for tok in re.split(r"(\d+)", name):
        if not tok:
            continue
        parts.append((0, int(tok), "") if tok.isdigit() else (1, 0, tok))
    return (tuple(parts), name)


@dataclass(frozen=True)
class GeneralizedScenario:
    """A multiset scenario: ``demand`` holds sorted ``(symbol, count)`` pairs."""

    demand: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.demand:
            raise InstanceError("generalized scenario has no positive demand")
        for _, c in self.demand:
            if c <= 0:
                raise InstanceError("generalized demands must be positive")

    @classmethod
    def from_mapping(cls, demand: Mapping[int, int]) -> "GeneralizedScenario":
        return cls(tuple(sorted((s, c) for s, c in demand.items() if c)))

    @property
    def support(self) -> int:
        return mask_of(s for s, _ in self.demand)

    def as_dict(self) -> dict[int, int]:
        return dict(self.demand)

    def total(self) -> int:
        return sum(c for _, c in self.demand)


@dataclass(frozen=True)
class Instance:
    """A normalized Minimum Feasible Tileset instance.

    Build instances with :func:`normalize` (or :meth:`from_sets`,
    :func:`parse_instance`); the constructor performs no normalization.
    """

    symbols: tuple[str, ...]
    scenarios: tuple[int, ...]
    budget: int | None = None
    generalized: tuple[GeneralizedScenario, ...] = ()
    report: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def from_sets(
        cls,
        n: int,
        scenarios: Iterable[Iterable[int]],
        budget: int | None = None,
        names: Sequence[str] | None = None,
        generalized: Iterable[Mapping[int, int]] = (),
    ) -> "Instance":
        """Build and normalize an instance from id-based scenario sets."""
        if names is None:
            names = [str(i) for i in range(n)]
        return normalize(names, [list(s) for s in scenarios], budget, list(generalized))

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def m(self) -> int:
        return len(self.scenarios)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def maximal_scenarios(self) -> tuple[int, ...]:
        """Scenarios not strictly contained in another one.

        A set is contained in some scenario iff it is contained in some
        maximal scenario, so containment tests only scan this view.
        """
        by_size = sorted(self.scenarios, key=lambda s: -s.bit_count())
        keep: list[int] = []
        for s in by_size:
            if not any(s & ~t == 0 for t in keep):
                keep.append(s)
        return tuple(sorted(keep))

    def is_contained(self, mask: int) -> bool:
        """True iff ``mask`` is a subset of some scenario."""
        return any(mask & ~s == 0 for s in self.maximal_scenarios)

    def members(self, i: int) -> list[int]:
        return bits(self.scenarios[i])

    def index_of(self, name: str) -> int:
        return self._index[name]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    def with_budget(self, budget: int | None) -> "Instance":
        return Instance(self.symbols, self.scenarios, budget, self.generalized, self.report)

    def demand_scenarios(self) -> list[GeneralizedScenario]:
        """All scenarios as demand maps; plain scenarios get unit demands."""
        out = [GeneralizedScenario(tuple((s, 1) for s in bits(sc))) for sc in self.scenarios]
        out.extend(self.generalized)
        return out


def normalize(
    symbols: Sequence[str],
    scenarios: Sequence[Sequence[int]],
    budget: int | None = None,
    generalized: Sequence[Mapping[int, int]] = (),
) -> Instance:
    """Validate and canonicalize raw instance data.

    Unused symbols are dropped, remaining symbols are ordered by natural
    name order, duplicate scenarios are removed and scenarios are sorted
    lexicographically by member ids.  Every change is listed in the
    returned instance's ``report``.
    """
    n = len(symbols)
    if len(set(symbols)) != n:
        raise InstanceError("duplicate symbol names")
    if budget is not None and (isinstance(budget, bool) or not isinstance(budget, int) or budget < 0):
        raise InstanceError(f"budget must be a non-negative integer, got {budget!r}")
    if not scenarios and not generalized:
        raise InstanceError("instance has no scenarios")

    masks = []
    for i, sc in enumerate(scenarios):
        if not sc:
            raise InstanceError(f"scenario {i} is empty")
        for s in sc:
            if not 0 <= s < n:
                raise InstanceError(f"scenario {i} references unknown symbol id {s}")
        masks.append(mask_of(sc))
    gens = []
    for i, dem in enumerate(generalized):
        dem = {s: c for s, c in dem.items() if c}
        for s, c in dem.items():
            if not 0 <= s < n:
                raise InstanceError(f"generalized scenario {i} references unknown symbol id {s}")
            if isinstance(c, bool) or not isinstance(c, int) or c < 0:
                raise InstanceError(f"generalized scenario {i} has invalid count {c!r}")
        if not dem:
            raise InstanceError(f"generalized scenario {i} is empty")
        gens.append(dem)

    used = 0
    for mk in masks:
        used |= mk
    for dem in gens:
        used |= mask_of(dem)

    report = []
    kept = [i for i in range(n) if used >> i & 1]
    for i in range(n):
        if not used >> i & 1:
            report.append(f"removed unused symbol {symbols[i]}")
    order = sorted(kept, key=lambda i: _natural_key(symbols[i]))
    remap = {old: new for new, old in enumerate(order)}
    new_symbols = tuple(symbols[i] for i in order)
    full = (1 << len(order)) - 1

    def remap_mask(mk: int) -> int:
        return mask_of(remap[b] for b in bits(mk))

    seen = set()
    new_masks = []
    for i, mk in enumerate(masks):
        nm = remap_mask(mk)
        if nm == full:
            raise InstanceError(f"scenario {i} equals the whole universe")
        if nm in seen:
            report.append(f"removed duplicate scenario {i}")
            continue
        seen.add(nm)
        new_masks.append(nm)
    new_masks.sort(key=bits)

    gseen = set()
    new_gens = []
    for i, dem in enumerate(gens):
        g = GeneralizedScenario.from_mapping({remap[s]: c for s, c in dem.items()})
        if g in gseen:
            report.append(f"removed duplicate generalized scenario {i}")
            continue
        gseen.add(g)
        new_gens.append(g)
    new_gens.sort(key=lambda g: g.demand)

    return Instance(new_symbols, tuple(new_masks), budget, tuple(new_gens), tuple(report))


def renormalize(inst: Instance) -> Instance:
    return normalize(
        inst.symbols,
        [bits(s) for s in inst.scenarios],
        inst.budget,
        [g.as_dict() for g in inst.generalized],
    )


# -- JSON documents ---------------------------------------------------------


def _load_json(text: str):
    if text.startswith("﻿"):
        raise ParseError("document starts with a byte order mark")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def _names_to_ids(names, index, what):
    if not isinstance(names, list):
        raise ParseError(f"{what} must be a list of symbol names")
    out = []
    for s in names:
        if not isinstance(s, str):
            raise ParseError(f"{what}: symbol names must be strings, got {s!r}")
        if s not in index:
            raise InstanceError(f"{what}: unknown symbol {s!r}")
        out.append(index[s])
    return out


def _parse_demand(entries, index, what):
    if not isinstance(entries, list):
        raise ParseError(f"{what} must be a list of {{symbol, count}} objects")
    dem: Counter[int] = Counter()
    for e in entries:
        if not isinstance(e, dict) or set(e) != {"symbol", "count"}:
            raise ParseError(f"{what}: entries must be objects with 'symbol' and 'count'")
        (sid,) = _names_to_ids([e["symbol"]], index, what)
        c = e["count"]
        if isinstance(c, bool) or not isinstance(c, int) or c <= 0:
            raise InstanceError(f"{what}: count must be a positive integer, got {c!r}")
        dem[sid] += c
    return dict(dem)


def instance_from_obj(obj) -> Instance:
    if not isinstance(obj, dict):
        raise ParseError("instance document must be a JSON object")
    unknown = set(obj) - {"symbols", "scenarios", "budget", "generalized"}
    if unknown:
        raise ParseError(f"unknown keys: {sorted(unknown)}")
    symbols = obj.get("symbols")
    if not isinstance(symbols, list) or not all(isinstance(s, str) for s in symbols):
        raise ParseError("'symbols' must be a list of strings")
    index = {s: i for i, s in enumerate(symbols)}
    if len(index) != len(symbols):
        raise InstanceError("duplicate symbol names")
    raw = obj.get("scenarios", [])
    if not isinstance(raw, list):
        raise ParseError("'scenarios' must be a list of lists")
    scenarios = [_names_to_ids(sc, index, f"scenario {i}") for i, sc in enumerate(raw)]
    for i, sc in enumerate(scenarios):
        if not sc:
            raise InstanceError(f"scenario {i} is empty")
    gen_raw = obj.get("generalized", [])
    if gen_raw and isinstance(gen_raw[0], dict):
        gen_raw = [gen_raw]
    generalized = [_parse_demand(g, index, f"generalized scenario {i}") for i, g in enumerate(gen_raw)]
    budget = obj.get("budget")
    if budget is not None and (isinstance(budget, bool) or not isinstance(budget, int)):
        raise ParseError("'budget' must be an integer")
    return normalize(symbols, scenarios, budget, generalized)


def parse_instance(text: str) -> Instance:
    """Parse and normalize an instance document."""
    return instance_from_obj(_load_json(text))


def instance_to_obj(inst: Instance) -> dict:
    obj: dict = {
        "symbols": list(inst.symbols),
        "scenarios": [[inst.symbols[b] for b in bits(s)] for s in inst.scenarios],
    }
    if inst.budget is not None:
        obj["budget"] = inst.budget
    if inst.generalized:
        obj["generalized"] = [
            [{"symbol": inst.symbols[s], "count": c} for s, c in g.demand] for g in inst.generalized
        ]
    return obj


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_obj(inst)) + "\n"


# -- tilesets ---------------------------------------------------------------


class Tileset:
    """A multiset of tiles, i.e. unordered pairs ``(a, b)`` with ``a < b``."""

    __slots__ = ("_counts",)

    def __init__(self, counts: Mapping[Tile, int] | Iterable[Tile] = ()):
        acc: Counter[Tile] = Counter()
        items = counts.items() if isinstance(counts, Mapping) else ((t, 1) for t in counts)
        for (a, b), c in items:
            if a == b:
                raise InstanceError(f"tile ({a}, {b}) has a single symbol")
            if c < 0:
                raise InstanceError("tile multiplicities must be positive")
            if c:
                acc[(a, b) if a < b else (b, a)] += c
        self._counts = dict(sorted(acc.items()))

    @property
    def counts(self) -> dict[Tile, int]:
        return dict(self._counts)

    def tiles(self) -> list[Tile]:
        """Distinct tiles in ascending order."""
        return list(self._counts)

    def occurrences(self) -> list[tuple[Tile, int]]:
        """Every tile copy as ``(tile, copy_index)``, ascending."""
        return [(t, k) for t, c in self._counts.items() for k in range(c)]

    def multiplicity(self, tile: Tile) -> int:
        a, b = tile
        return self._counts.get((a, b) if a < b else (b, a), 0)

    @property
    def size(self) -> int:
        return sum(self._counts.values())

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[Tile]:
        for t, c in self._counts.items():
            for _ in range(c):
                yield t

    def __eq__(self, other) -> bool:
        return isinstance(other, Tileset) and self._counts == other._counts

    def __hash__(self) -> int:
        return hash(tuple(self._counts.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{t}: {c}" if c > 1 else str(t) for t, c in self._counts.items())
        return f"Tileset({{{body}}})"

    def is_simple(self) -> bool:
        return all(c == 1 for c in self._counts.values())

    def max_symbol(self) -> int:
        return max((b for _, b in self._counts), default=-1)


def parse_tileset(text: str, inst: Instance) -> Tileset:
    """Parse ``{"tiles": [[a, b], ...]}`` (or a bare list) against ``inst``.

    Repeated tiles become multiplicities.  Unit tiles are rejected.
    """
    obj = _load_json(text)
    if isinstance(obj, dict):
        obj = obj.get("tiles")
    if not isinstance(obj, list):
        raise ParseError("tileset document must be a list of tiles or {'tiles': [...]}")
    pairs = []
    for t in obj:
        if not isinstance(t, list) or not all(isinstance(s, str) for s in t):
            raise ParseError(f"tile {t!r} must be a list of symbol names")
        if len(t) != 2 or t[0] == t[1]:
            raise ParseError(f"tile {t!r} must contain exactly two distinct symbols")
        a, b = _names_to_ids(t, inst._index, "tileset")
        pairs.append((a, b))
    return Tileset(pairs)


def tileset_to_obj(ts: Tileset, inst: Instance) -> list[list[str]]:
    return [[inst.symbols[a], inst.symbols[b]] for a, b in ts]


def serialize_tileset(ts: Tileset, inst: Instance) -> str:
    return json.dumps({"tiles": tileset_to_obj(ts, inst)}) + "\n"


# -- tileset graph ----------------------------------------------------------


class TilesetGraph:
    """Undirected multigraph on symbols ``0..n-1`` with one edge per tile copy."""

    def __init__(self, ts: Tileset, n: int):
        if ts.max_symbol() >= n:
            raise InstanceError(f"tile endpoint {ts.max_symbol()} outside universe of size {n}")
        self.n = n
        self.edges: list[Tile] = list(ts)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        self._cyclic_roots = set()
        merged_cyclic = []
        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                merged_cyclic.append(a)
            else:
                parent[max(ra, rb)] = min(ra, rb)
        self._find = find
        groups: dict[int, list[int]] = {}
        for v in range(n):
            groups.setdefault(find(v), []).append(v)
        self._components = sorted(groups.values())
        self._cyclic_roots = {find(v) for v in merged_cyclic}

    def components(self) -> list[list[int]]:
        """Connected components as ascending vertex lists, ordered by min vertex."""
        return [list(c) for c in self._components]

    def component_masks(self) -> list[int]:
        return [mask_of(c) for c in self._components]

    def component_of(self, v: int) -> int:
        return self._find(v)

    @property
    def is_forest(self) -> bool:
        return not self._cyclic_roots

    def cyclic_components(self) -> list[list[int]]:
        return [c for c in self._components if self._find(c[0]) in self._cyclic_roots]

    def tree_components(self) -> list[list[int]]:
        return [c for c in self._components if self._find(c[0]) not in self._cyclic_roots]


def tileset_graph(ts: Tileset, n: int) -> TilesetGraph:
    return TilesetGraph(ts, n)
