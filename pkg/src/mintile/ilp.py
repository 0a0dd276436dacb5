"""Integer feasibility models for the tileset problem.

Two formulations are built here:

* the *pattern* model for few scenarios, with one variable per way a symbol
  can split its scenario set among providing tiles (``y``) and one variable
  per way a tile splits its two sides among scenarios (``x``);
* the *Hall* model for few symbols, with one variable per tile type and a
  Hall-condition constraint for every scenario and symbol subset.  It also
  handles multiset (generalized) scenarios.

Models are plain data with exact integer coefficients.  ``solve_small`` is a
depth-first search with bound propagation meant for desk-sized models only.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from itertools import combinations

from .errors import (
    InstanceError,
    MissingBudget,
    ParseError,
    SearchSpaceTooLarge,
    TooManyScenarios,
    UniverseTooLarge,
    UnknownVariable,
)
from .model import Instance, Tileset, bits

PATTERN_CAP = 4
HALL_CAP = 12
NODE_LIMIT = 2_000_000

SENSES = ("<=", "=", ">=")


@dataclass(frozen=True)
class Variable:
    name: str
    lb: int = 0
    ub: int | None = None


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[str, int], ...]
    sense: str
    rhs: int

    def activity(self, values) -> int:
        return sum(c * values[v] for v, c in self.terms)

    def holds(self, values) -> bool:
        act = self.activity(values)
        if self.sense == "<=":
            return act <= self.rhs
        if self.sense == ">=":
            return act >= self.rhs
        return act == self.rhs


@dataclass
class IlpModel:
    """Feasibility model: no objective, integer variables with lower bound 0."""

    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    # builder-specific decoding info, not serialized
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._names = {v.name for v in self.variables}

    def add_variable(self, name: str, lb: int = 0, ub: int | None = None) -> str:
        if name in self._names:
            raise ValueError(f"variable {name} declared twice")
        self.variables.append(Variable(name, lb, ub))
        self._names.add(name)
        return name

    def add_constraint(self, name: str, terms, sense: str, rhs: int) -> None:
        if sense not in SENSES:
            raise ValueError(f"unknown sense {sense!r}")
        merged: dict[str, int] = {}
        for v, c in terms:
            if v not in self._names:
                raise UnknownVariable(v)
            merged[v] = merged.get(v, 0) + c
        self.constraints.append(Constraint(name, tuple(merged.items()), sense, rhs))

    @property
    def variable_names(self) -> list[str]:
        return [v.name for v in self.variables]


# -- pattern model ----------------------------------------------------------


def _fmt_set(mask: int) -> str:
    return "{" + ",".join(str(i + 1) for i in bits(mask)) + "}"


def _set_key(mask: int):
    return (mask.bit_count(), [i for i in bits(mask)])


def subset_partitions(mask: int) -> list[tuple[int, ...]]:
    """All partitions of the set ``mask`` as tuples of block masks.

    Generated by restricted growth strings; each tuple is sorted by
    ``(block size descending, members)`` so it doubles as a canonical form.
    """
    elems = bits(mask)
    if not elems:
        return [()]
    out = []

    def rec(i: int, blocks: list[int]):
        if i == len(elems):
            out.append(tuple(sorted(blocks, key=lambda b: (-b.bit_count(), bits(b)))))
            return
        e = 1 << elems[i]
        for j in range(len(blocks)):
            blocks[j] |= e
            rec(i + 1, blocks)
            blocks[j] ^= e
        blocks.append(e)
        rec(i + 1, blocks)
        blocks.pop()

    rec(0, [])
    return out


def _y_name(blocks: tuple[int, ...]) -> str:
    return "y" + "".join(_fmt_set(b) for b in blocks)


def _x_pairs(k: int) -> list[tuple[int, int]]:
    seen = set()
    out = []
    for code in range(1, 3**k):
        i_mask = j_mask = 0
        c = code
        for pos in range(k):
            c, r = divmod(c, 3)
            if r == 1:
                i_mask |= 1 << pos
            elif r == 2:
                j_mask |= 1 << pos
        a, b = sorted((i_mask, j_mask), key=_set_key)
        if (a, b) not in seen:
            seen.add((a, b))
            out.append((a, b))
    out.sort(key=lambda p: (_set_key(p[0]), _set_key(p[1])))
    return out


def _x_name(a: int, b: int) -> str:
    return "x" + _fmt_set(a) + _fmt_set(b)


def symbol_class_counts(inst: Instance) -> dict[int, int]:
    """``c_I`` for every non-empty scenario-index set ``I`` (bit i = scenario i+1)."""
    k = inst.m
    counts = {mask: 0 for mask in range(1, 1 << k)}
    for v in range(inst.n):
        mem = 0
        for i, s in enumerate(inst.scenarios):
            if s >> v & 1:
                mem |= 1 << i
        if mem:
            counts[mem] += 1
    return counts


def build_pattern_ilp(inst: Instance, cap: int = PATTERN_CAP) -> IlpModel:
    """Pattern model that is feasible iff a tileset of ``inst.budget`` tiles exists.

    Constraint families, for each non-empty scenario-index set ``I``:
    ``sum of y over partitions of I = c_I`` and ``sum of y over partitions
    having I as a block = sum over J of x_{I,J}``; plus ``sum x <= budget``.
    Each unordered ``{I, J}`` is one variable, so the budget row has unit
    coefficients.
    """
    if inst.generalized:
        raise InstanceError("the pattern model handles plain scenarios only")
    if inst.budget is None:
        raise MissingBudget("the pattern model needs a budget")
    k = inst.m
    if k > cap:
        raise TooManyScenarios(k, cap)
    budget = inst.budget
    counts = symbol_class_counts(inst)
    groups = sorted(counts, key=_set_key)

    model = IlpModel()
    y_info: dict[str, tuple[int, tuple[int, ...]]] = {}
    y_by_group: dict[int, list[str]] = {}
    y_by_block: dict[int, list[str]] = {g: [] for g in groups}
    for g in groups:
        names = []
        for blocks in subset_partitions(g):
            name = model.add_variable(_y_name(blocks), 0, counts[g])
            y_info[name] = (g, blocks)
            names.append(name)
            for b in blocks:
                y_by_block[b].append(name)
        y_by_group[g] = names

    x_info: dict[str, tuple[int, int]] = {}
    x_by_side: dict[int, list[str]] = {g: [] for g in groups}
    for a, b in _x_pairs(k):
        name = model.add_variable(_x_name(a, b), 0, budget)
        x_info[name] = (a, b)
        for side in (a, b):
            if side:
                x_by_side[side].append(name)

    for g in groups:
        model.add_constraint(f"count{_fmt_set(g)}", [(y, 1) for y in y_by_group[g]], "=", counts[g])
    for g in groups:
        terms = [(y, 1) for y in y_by_block[g]] + [(x, -1) for x in x_by_side[g]]
        model.add_constraint(f"pattern{_fmt_set(g)}", terms, "=", 0)
    model.add_constraint("budget", [(x, 1) for x in x_info], "<=", budget)
    model.meta = {"kind": "pattern", "k": k, "y": y_info, "x": x_info, "counts": counts}
    return model


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def pattern_variable_counts(k: int) -> tuple[int, int]:
    """Closed forms ``(y-count, x-count)``: non-empty subpartitions of [k] and (3^k-1)/2."""
    return bell(k + 1) - 1, (3**k - 1) // 2


def pattern_solution_to_tileset(inst: Instance, model: IlpModel, values: dict[str, int]) -> Tileset:
    """Decode a feasible pattern assignment into a concrete tileset.

    Symbols of each class receive patterns according to the ``y`` counts;
    for every scenario-index block the symbols needing it and the tile sides
    offering it are paired in order.  A side left empty (or a tile whose two
    sides went to the same symbol) is completed with an arbitrary other
    symbol, which never serves any scenario.
    """
    meta = model.meta
    if meta.get("kind") != "pattern":
        raise ValueError("not a pattern model")
    members: dict[int, list[int]] = {}
    for v in range(inst.n):
        mem = 0
        for i, s in enumerate(inst.scenarios):
            if s >> v & 1:
                mem |= 1 << i
        members.setdefault(mem, []).append(v)

    slots: dict[int, list[int]] = {}
    queue = {g: list(vs) for g, vs in members.items()}
    for name, (g, blocks) in meta["y"].items():
        for _ in range(values[name]):
            sym = queue[g].pop(0)
            for b in blocks:
                slots.setdefault(b, []).append(sym)

    tiles = []
    for name, (a, b) in meta["x"].items():
        for _ in range(values[name]):
            s = slots[a].pop(0) if a else None
            t = slots[b].pop(0) if b else None
            if s is None or s == t:
                s = 0 if t != 0 else 1
            tiles.append((s, t))
    return Tileset(tiles)


# -- Hall model -------------------------------------------------------------


def build_hall_ilp(inst: Instance, cap: int = HALL_CAP, demand_only: bool = False) -> IlpModel:
    """Tile-type model valid for multiset scenarios.

    One variable ``x_{s,s'}`` per symbol pair, ``sum x <= budget``, and for
    every scenario ``S`` and symbol subset ``I``: tiles touching ``I`` must
    number at least the total demand of ``I`` in ``S``.  By default all
    ``2^|F|`` subsets are emitted (the empty one is trivially satisfied);
    ``demand_only`` restricts ``I`` to non-empty subsets of the demanded
    symbols, which is an equivalent but smaller model.
    """
    if inst.budget is None:
        raise MissingBudget("the Hall model needs a budget")
    n = inst.n
    if n > cap:
        raise UniverseTooLarge(n, cap)
    budget = inst.budget
    model = IlpModel()
    pair_vars = {}
    for a, b in combinations(range(n), 2):
        pair_vars[(a, b)] = model.add_variable(f"x_{a}_{b}", 0, budget)
    model.add_constraint("budget", [(x, 1) for x in pair_vars.values()], "<=", budget)
    for si, scen in enumerate(inst.demand_scenarios()):
        dem = scen.as_dict()
        if demand_only:
            support = scen.support
            subsets = [m for m in range(1, 1 << n) if m & ~support == 0]
        else:
            subsets = range(1 << n)
        for sub in subsets:
            terms = [(x, 1) for (a, b), x in pair_vars.items() if (sub >> a | sub >> b) & 1]
            rhs = sum(dem.get(s, 0) for s in bits(sub))
            model.add_constraint(f"hall{si}_{sub}", terms, ">=", rhs)
    model.meta = {"kind": "hall", "pairs": {x: p for p, x in pair_vars.items()}}
    return model


def hall_solution_to_tileset(model: IlpModel, values: dict[str, int]) -> Tileset:
    return Tileset({pair: values[x] for x, pair in model.meta["pairs"].items() if values[x]})


# -- checking and solving ---------------------------------------------------


def check_assignment(model: IlpModel, values: dict[str, int]) -> bool:
    """Exact check of bounds and every constraint.

    Raises:
        UnknownVariable: ``values`` names a variable the model lacks.
        ValueError: some model variable has no value.
    """
    names = set(model.variable_names)
    extra = set(values) - names
    if extra:
        raise UnknownVariable(", ".join(sorted(extra)))
    missing = names - set(values)
    if missing:
        raise ValueError(f"unassigned variables: {sorted(missing)}")
    for v in model.variables:
        x = values[v.name]
        if not isinstance(x, int) or x < v.lb or (v.ub is not None and x > v.ub):
            return False
    return all(c.holds(values) for c in model.constraints)


class _Propagator:
    def __init__(self, model: IlpModel, var_cap: int | None):
        self.names = model.variable_names
        index = {n: i for i, n in enumerate(self.names)}
        self.lo0 = [v.lb for v in model.variables]
        hi = []
        for v in model.variables:
            u = v.ub if v.ub is not None else var_cap
            if u is None:
                raise SearchSpaceTooLarge(f"variable {v.name} is unbounded; pass var_cap")
            if var_cap is not None:
                u = min(u, var_cap)
            hi.append(u)
        self.hi0 = hi
        rows = []
        for c in model.constraints:
            idx = [index[v] for v, _ in c.terms]
            coef = [a for _, a in c.terms]
            if c.sense in ("<=", "="):
                rows.append((idx, coef, c.rhs))
            if c.sense in (">=", "="):
                rows.append((idx, [-a for a in coef], -c.rhs))
        self.rows = rows
        self.watch: list[list[int]] = [[] for _ in self.names]
        for r, (idx, _, _) in enumerate(rows):
            for i in idx:
                self.watch[i].append(r)

    def propagate(self, lo: list[int], hi: list[int], dirty) -> bool:
        """Tighten bounds to a fixpoint over ``sum coef*x <= rhs`` rows."""
        rows = self.rows
        pending = set(dirty)
        while pending:
            r = pending.pop()
            idx, coef, rhs = rows[r]
            minact = 0
            for i, a in zip(idx, coef):
                minact += a * (lo[i] if a > 0 else hi[i])
            slack = rhs - minact
            if slack < 0:
                return False
            for i, a in zip(idx, coef):
                if a > 0:
                    room = lo[i] + slack // a
                    if room < hi[i]:
                        if room < lo[i]:
                            return False
                        hi[i] = room
                        pending.update(self.watch[i])
                elif a < 0:
                    room = hi[i] - slack // (-a)
                    if room > lo[i]:
                        if room > hi[i]:
                            return False
                        lo[i] = room
                        pending.update(self.watch[i])
        return True


def solve_small(model: IlpModel, var_cap: int | None = None, node_limit: int = NODE_LIMIT):
    """Find an integer point of ``model`` by depth-first search, or None.

    Variables without an upper bound are capped by ``var_cap``.  Each node
    propagates bounds to a fixpoint, then branches on the unfixed variable
    with the smallest domain.

    Raises:
        SearchSpaceTooLarge: more than ``node_limit`` nodes were expanded.
    """
    prop = _Propagator(model, var_cap)
    n = len(prop.names)
    lo, hi = list(prop.lo0), list(prop.hi0)
    if any(l > h for l, h in zip(lo, hi)):
        return None
    if not prop.propagate(lo, hi, range(len(prop.rows))):
        return None
    nodes = 0
    stack = [(lo, hi)]
    while stack:
        lo, hi = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise SearchSpaceTooLarge(f"more than {node_limit} search nodes")
        pick = -1
        width = None
        for i in range(n):
            w = hi[i] - lo[i]
            if w and (width is None or w < width):
                pick, width = i, w
        if pick < 0:
            values = dict(zip(prop.names, lo))
            assert check_assignment(model, values)
            return values
        # push larger values first so the smallest value is explored first
        for val in range(hi[pick], lo[pick] - 1, -1):
            nlo, nhi = list(lo), list(hi)
            nlo[pick] = nhi[pick] = val
            if prop.propagate(nlo, nhi, prop.watch[pick]):
                stack.append((nlo, nhi))
    return None


def search_space(model: IlpModel, var_cap: int | None = None) -> int:
    """Product of domain sizes before propagation."""
    prop = _Propagator(model, var_cap)
    return math.prod(h - l + 1 for l, h in zip(prop.lo0, prop.hi0))


# -- serialization ----------------------------------------------------------


def _lp_expr(terms) -> str:
    parts = []
    for v, c in terms:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        parts.append(f"{sign} {v}" if mag == 1 else f"{sign} {mag} {v}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def export_lp(model: IlpModel) -> str:
    """CPLEX LP text: zero objective, constraints, bounds and general integers."""
    lines = ["\\ integer feasibility model", "Minimize", " obj:"]
    if model.variables:
        lines[-1] += f" 0 {model.variables[0].name}"
    lines.append("Subject To")
    for c in model.constraints:
        terms = c.terms
        if not terms and model.variables:
            terms = ((model.variables[0].name, 0),)
        expr = _lp_expr(terms)
        lines.append(f" {c.name}: {expr} {c.sense} {c.rhs}")
    lines.append("Bounds")
    for v in model.variables:
        if v.ub is None:
            lines.append(f" {v.name} >= {v.lb}")
        else:
            lines.append(f" {v.lb} <= {v.name} <= {v.ub}")
    lines.append("Generals")
    if model.variables:
        lines.append(" " + " ".join(model.variable_names))
    lines.append("End")
    return "\n".join(lines) + "\n"


_TERM = re.compile(r"([+-])?\s*(\d+)?\s*([^\s+\-<>=:]+)")


def _parse_terms(expr: str):
    terms = []
    pos = 0
    expr = expr.strip()
    while pos < len(expr):
        m = _TERM.match(expr, pos)
        if not m:
            raise ParseError(f"bad LP expression {expr!r}")
        sign, mag, name = m.groups()
        c = int(mag) if mag else 1
        terms.append((name, -c if sign == "-" else c))
        pos = m.end()
        while pos < len(expr) and expr[pos] == " ":
            pos += 1
    return terms


def read_lp(text: str) -> IlpModel:
    """Read back the subset of LP syntax written by :func:`export_lp`."""
    section = None
    cons = []
    bounds: dict[str, tuple[int, int | None]] = {}
    generals: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("minimize", "subject to", "bounds", "generals", "end"):
            section = low
            continue
        if section == "subject to":
            name, rest = line.split(":", 1)
            m = re.match(r"(.*?)\s*(<=|>=|=)\s*(-?\d+)$", rest.strip())
            if not m:
                raise ParseError(f"bad constraint line {line!r}")
            terms = [(v, c) for v, c in _parse_terms(m.group(1)) if c != 0]
            cons.append((name.strip(), terms, m.group(2), int(m.group(3))))
        elif section == "bounds":
            m = re.match(r"(-?\d+)\s*<=\s*(\S+)\s*<=\s*(-?\d+)$", line)
            if m:
                bounds[m.group(2)] = (int(m.group(1)), int(m.group(3)))
                continue
            m = re.match(r"(\S+)\s*>=\s*(-?\d+)$", line)
            if not m:
                raise ParseError(f"bad bound line {line!r}")
            bounds[m.group(1)] = (int(m.group(2)), None)
        elif section == "generals":
            generals.extend(line.split())
    model = IlpModel()
    for name in generals:
        lb, ub = bounds.get(name, (0, None))
        model.add_variable(name, lb, ub)
    for name, terms, sense, rhs in cons:
        model.add_constraint(name, terms, sense, rhs)
    return model


def model_to_obj(model: IlpModel) -> dict:
    return {
        "variables": [{"name": v.name, "lb": v.lb, "ub": v.ub} for v in model.variables],
        "constraints": [
            {"name": c.name, "terms": [[v, a] for v, a in c.terms], "sense": c.sense, "rhs": c.rhs}
            for c in model.constraints
        ],
    }


def model_to_json(model: IlpModel) -> str:
    return json.dumps(model_to_obj(model), indent=1) + "\n"


def model_from_obj(obj: dict) -> IlpModel:
    model = IlpModel()
    for v in obj["variables"]:
        model.add_variable(v["name"], v["lb"], v["ub"])
    for c in obj["constraints"]:
        model.add_constraint(c["name"], [tuple(t) for t in c["terms"]], c["sense"], c["rhs"])
    return model
