"""Exact cover by d-sets -> minimum feasible tileset.

The produced scenarios are all ``(d-1)``-subsets of the universe plus every
``d``-subset that is *not* an allowed set.  Parts of an admissible partition
then have size at least ``d``, and reaching ``|X|/d`` parts forces every part
to be an allowed ``d``-set, i.e. an exact cover.  The budget is
``|X| - |X|/d``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import MalformedSet, MalformedTriple, ParseError
from .model import Instance, normalize


@dataclass(frozen=True)
class X3cInstance:
    universe: tuple[str, ...]
    sets: tuple[tuple[str, ...], ...]


def parse_exact_cover(text: str) -> X3cInstance:
    """Read ``{"universe": [...], "sets": [[...], ...]}``; elements become strings."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(obj, dict) or "universe" not in obj or "sets" not in obj:
        raise ParseError("exact cover document needs 'universe' and 'sets'")
    if not isinstance(obj["universe"], list) or not isinstance(obj["sets"], list):
        raise ParseError("'universe' and 'sets' must be lists")
    for s in obj["sets"]:
        if not isinstance(s, list):
            raise ParseError("every set must be a list")
    return X3cInstance(
        tuple(str(x) for x in obj["universe"]),
        tuple(tuple(str(x) for x in s) for s in obj["sets"]),
    )


def no_instance(reason: str) -> Instance:
    """A fixed NO instance: two symbols, each its own scenario, budget 0."""
    inst = normalize(["no_a", "no_b"], [[0], [1]], 0)
    return Instance(inst.symbols, inst.scenarios, 0, (), (f"no exact cover: {reason}",))


def xdc_to_mft(universe, dsets, d: int, _error=MalformedSet) -> Instance:
    if d < 3:
        raise _error(f"set size d must be at least 3, got {d}")
    names = [str(x) for x in universe]
    if not names:
        raise _error("empty universe")
    index = {x: i for i, x in enumerate(names)}
    if len(index) != len(names):
        raise _error("duplicate universe elements")
    allowed = set()
    for s in dsets:
        members = [str(x) for x in s]
        if len(members) != d or len(set(members)) != d or any(x not in index for x in members):
            raise _error(f"{members} is not a {d}-subset of the universe")
        allowed.add(tuple(sorted(index[x] for x in members)))

    n = len(names)
    if n % d:
        return no_instance(f"|X|={n} is not divisible by {d}")
    full = tuple(range(n))
    if n == d and full not in allowed:
        return no_instance("the only candidate part is the whole universe, which is not allowed")
    scenarios = [list(c) for c in combinations(range(n), d - 1)]
    scenarios += [list(c) for c in combinations(range(n), d) if c not in allowed]
    return normalize(names, scenarios, n - n // d)


def x3c_to_mft(x3c: X3cInstance) -> Instance:
    """Reduce Exact Cover by 3-Sets; |X| not divisible by 3 yields :func:`no_instance`."""
    return xdc_to_mft(x3c.universe, x3c.sets, 3, _error=MalformedTriple)
