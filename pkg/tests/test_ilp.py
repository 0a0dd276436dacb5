import math
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mintile import ilp
from mintile.errors import (
    InstanceError,
    MissingBudget,
    SearchSpaceTooLarge,
    TooManyScenarios,
    UniverseTooLarge,
    UnknownVariable,
)
from mintile.exact import solve_dp
from mintile.feasibility import is_feasible
from mintile.model import GeneralizedScenario, Instance
from strategies import instances


def raw_instance(n, demands, budget):
    """Build without normalization so unused symbols stay in the universe."""
    gens = tuple(GeneralizedScenario.from_mapping(d) for d in demands)
    return Instance(tuple(str(i) for i in range(n)), (), budget, gens)


def test_k1_pattern_model():
    # one scenario S1 = {a} over F = {a, b}
    model = ilp.build_pattern_ilp(Instance(("a", "b"), (0b01,), 1))
    assert model.variable_names == ["y{1}", "x{}{1}"]
    assert [c.name for c in model.constraints] == ["count{1}", "pattern{1}", "budget"]
    assert model.meta["counts"] == {1: 1}


def test_k1_assignment_and_solve():
    for size, budget in product((1, 2, 3), (0, 1, 2, 3)):
        n = size + 1
        inst = Instance(tuple(str(i) for i in range(n)), ((1 << size) - 1,), budget)
        model = ilp.build_pattern_ilp(inst)
        values = {"y{1}": size, "x{}{1}": size}
        assert ilp.check_assignment(model, values) == (size <= budget)
        assert (ilp.solve_small(model) is not None) == (size <= budget)


def test_check_assignment_errors():
    inst = Instance(("a", "b"), (0b01,), 1)
    model = ilp.build_pattern_ilp(inst)
    with pytest.raises(UnknownVariable):
        ilp.check_assignment(model, {"y{1}": 1, "x{}{1}": 1, "zz": 0})
    with pytest.raises(ValueError):
        ilp.check_assignment(model, {"y{1}": 1})
    assert not ilp.check_assignment(model, {"y{1}": 0, "x{}{1}": 0})


def test_budget_only_model():
    model = ilp.IlpModel()
    for name in ("a", "b"):
        model.add_variable(name, 0, 5)
    model.add_constraint("budget", [("a", 1), ("b", 1)], "<=", 3)
    assert ilp.check_assignment(model, {"a": 0, "b": 0})
    with pytest.raises(UnknownVariable):
        model.add_constraint("bad", [("c", 1)], "<=", 1)


def test_contradictory_equality():
    model = ilp.IlpModel()
    model.add_variable("y", 0, 2)
    model.add_variable("z", 0, 1)
    model.add_constraint("count", [("y", 1), ("z", 1)], "=", 4)
    assert ilp.solve_small(model) is None


def test_pattern_errors():
    with pytest.raises(MissingBudget):
        ilp.build_pattern_ilp(Instance.from_sets(2, [[0], [1]]))
    many = Instance.from_sets(6, [[v] for v in range(6)], budget=3)
    with pytest.raises(TooManyScenarios, match="scenario count"):
        ilp.build_pattern_ilp(many)
    with pytest.raises(InstanceError):
        ilp.build_pattern_ilp(Instance.from_sets(3, [[0, 1]], budget=2, generalized=[{2: 1}]))


def test_closed_forms():
    assert ilp.pattern_variable_counts(3) == (14, 13)
    assert len(ilp.subset_partitions(0b111)) == 5
    names = sorted(ilp._y_name(b) for b in ilp.subset_partitions(0b111))
    assert names == sorted(["y{1,2,3}", "y{1,2}{3}", "y{1,3}{2}", "y{2,3}{1}", "y{1}{2}{3}"])
    for k in range(1, 6):
        y, x = ilp.pattern_variable_counts(k)
        assert len(ilp._x_pairs(k)) == x
        assert sum(len(ilp.subset_partitions(m)) for m in range(1, 1 << k)) == y
        assert y <= k**k + 1 or k == 1


def test_pattern_model_size_k3():
    inst = Instance.from_sets(5, [[0, 1], [1, 2, 3], [3, 4]], budget=3)
    model = ilp.build_pattern_ilp(inst)
    y, x = ilp.pattern_variable_counts(3)
    assert len(model.variables) == y + x
    assert len(model.constraints) == 2 * 7 + 1


@given(instances(max_n=6).filter(lambda i: i.m <= 3))
def test_pattern_matches_dp(inst):
    opt = solve_dp(inst).opt
    for budget in range(math.ceil(inst.n / 2), inst.n + 1):
        b = inst.with_budget(budget)
        model = ilp.build_pattern_ilp(b)
        sol = ilp.solve_small(model)
        assert (sol is not None) == (opt <= budget)
        if sol:
            assert ilp.check_assignment(model, sol)
            ts = ilp.pattern_solution_to_tileset(b, model, sol)
            assert is_feasible(ts, b).feasible and len(ts) <= budget


def test_hall_examples():
    inst = raw_instance(2, [{0: 1}], 1)
    model = ilp.build_hall_ilp(inst)
    assert model.variable_names == ["x_0_1"]
    row = next(c for c in model.constraints if c.name == "hall0_1")
    assert row.terms == (("x_0_1", 1),) and row.rhs == 1 and row.sense == ">="
    assert ilp.solve_small(model) == {"x_0_1": 1}

    both = raw_instance(2, [{0: 1, 1: 1}], 1)
    assert ilp.solve_small(ilp.build_hall_ilp(both)) is None
    assert ilp.solve_small(ilp.build_hall_ilp(both, demand_only=True)) is None

    two = raw_instance(3, [{0: 2}], 2)
    model = ilp.build_hall_ilp(two)
    assert ilp.check_assignment(model, {"x_0_1": 1, "x_0_2": 1, "x_1_2": 0})
    sol = ilp.solve_small(model)
    ts = ilp.hall_solution_to_tileset(model, sol)
    assert is_feasible(ts, two).feasible and len(ts) == 2


def test_hall_counts_and_errors():
    inst = Instance.from_sets(3, [[0], [1, 2], [2]], budget=2)
    model = ilp.build_hall_ilp(inst)
    assert len(model.variables) == 3
    assert len(model.constraints) == 1 + inst.m * 8
    with pytest.raises(MissingBudget):
        ilp.build_hall_ilp(inst.with_budget(None))
    big = Instance.from_sets(13, [[v] for v in range(13)], budget=7)
    with pytest.raises(UniverseTooLarge):
        ilp.build_hall_ilp(big)


def test_node_limit():
    inst = Instance.from_sets(6, [[0, 1, 2], [3, 4], [5]], budget=3)
    model = ilp.build_pattern_ilp(inst)
    with pytest.raises(SearchSpaceTooLarge):
        ilp.solve_small(model, node_limit=1)
    assert ilp.search_space(model) > 1


def test_empty_model_export():
    text = ilp.export_lp(ilp.IlpModel())
    assert text.splitlines() == [
        "\\ integer feasibility model", "Minimize", " obj:", "Subject To", "Bounds", "Generals", "End",
    ]


def test_k1_export_counts():
    model = ilp.build_pattern_ilp(Instance(("a", "b"), (0b01,), 1))
    text = ilp.export_lp(model)
    back = ilp.read_lp(text)
    assert len(back.variables) == 2 and len(back.constraints) == 3


@given(instances(max_n=5).filter(lambda i: i.m <= 3), st.integers(0, 5), st.data())
def test_lp_and_json_round_trip(inst, budget, data):
    for model in (ilp.build_pattern_ilp(inst.with_budget(budget)), ilp.build_hall_ilp(inst.with_budget(budget))):
        for back in (ilp.read_lp(ilp.export_lp(model)), ilp.model_from_obj(ilp.model_to_obj(model))):
            assert back.variable_names == model.variable_names
            assert [(v.lb, v.ub) for v in back.variables] == [(v.lb, v.ub) for v in model.variables]
            assert len(back.constraints) == len(model.constraints)
            values = {v.name: data.draw(st.integers(v.lb, min(v.ub, 3))) for v in model.variables}
            assert ilp.check_assignment(back, values) == ilp.check_assignment(model, values)
