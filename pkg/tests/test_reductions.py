import json
from itertools import combinations

import pytest

from mintile.errors import MalformedSet, MalformedTriple, ParseError
from mintile.exact import solve_dp
from mintile.model import bits
from mintile.reductions import X3cInstance, parse_exact_cover, x3c_to_mft, xdc_to_mft
from oracles import has_exact_cover

SIX = tuple(str(i) for i in range(1, 7))


def test_yes_instance():
    inst = x3c_to_mft(X3cInstance(SIX, (("1", "2", "3"), ("4", "5", "6"))))
    assert inst.m == 15 + 18 and inst.budget == 4
    sol = solve_dp(inst)
    assert sol.opt == 4
    assert sol.partition.to_obj(inst) == [["1", "2", "3"], ["4", "5", "6"]]


def test_no_instance_overlap():
    inst = x3c_to_mft(X3cInstance(SIX, (("1", "2", "3"), ("1", "4", "5"))))
    assert solve_dp(inst).opt > inst.budget


def test_not_divisible_gives_no_marker():
    inst = x3c_to_mft(X3cInstance(("1", "2", "3", "4"), ()))
    assert inst.budget == 0 and solve_dp(inst).opt > 0
    assert any("no exact cover" in r for r in inst.report)


def test_whole_universe_single_set():
    yes = x3c_to_mft(X3cInstance(("a", "b", "c"), (("a", "b", "c"),)))
    assert solve_dp(yes).opt <= yes.budget
    no = x3c_to_mft(X3cInstance(("a", "b", "c"), ()))
    assert solve_dp(no).opt > no.budget


def test_scenario_sizes_bounded():
    inst = x3c_to_mft(X3cInstance(SIX, (("1", "2", "3"),)))
    assert max(s.bit_count() for s in inst.scenarios) <= 3


def test_d3_matches_x3c():
    sets = (("1", "2", "3"), ("2", "4", "6"))
    assert xdc_to_mft(SIX, sets, 3) == x3c_to_mft(X3cInstance(SIX, sets))


def test_d4_yes_and_no():
    x = [str(i) for i in range(1, 9)]
    yes = xdc_to_mft(x, [["1", "2", "3", "4"], ["5", "6", "7", "8"]], 4)
    assert yes.budget == 6 and solve_dp(yes).opt == 6
    no = xdc_to_mft(x, [["1", "2", "3", "4"], ["1", "5", "6", "7"], ["2", "5", "6", "8"]], 4)
    assert solve_dp(no).opt > no.budget


def test_optimal_parts_are_allowed_sets():
    sets = [("1", "2", "3"), ("4", "5", "6"), ("1", "4", "5"), ("2", "3", "6")]
    inst = x3c_to_mft(X3cInstance(SIX, tuple(sets)))
    allowed = {tuple(sorted(inst.index_of(x) for x in s)) for s in sets}
    for part in solve_dp(inst).partition.parts:
        assert part in allowed


def test_exhaustive_small():
    for r in range(0, 4):
        for fam in combinations(list(combinations(range(6), 3)), r):
            inst = xdc_to_mft(range(6), fam, 3)
            assert has_exact_cover(range(6), fam) == (solve_dp(inst).opt <= inst.budget)


def test_malformed():
    with pytest.raises(MalformedTriple):
        x3c_to_mft(X3cInstance(SIX, (("1", "2"),)))
    with pytest.raises(MalformedTriple):
        x3c_to_mft(X3cInstance(SIX, (("1", "2", "9"),)))
    with pytest.raises(MalformedSet):
        xdc_to_mft(SIX, [["1", "2", "3"]], 4)
    with pytest.raises(MalformedSet):
        xdc_to_mft(SIX, [], 2)


def test_parse():
    x = parse_exact_cover(json.dumps({"universe": [1, 2, 3], "sets": [[1, 2, 3]]}))
    assert x.universe == ("1", "2", "3") and x.sets == (("1", "2", "3"),)
    with pytest.raises(ParseError):
        parse_exact_cover('{"universe": [1]}')


def test_scenarios_lexicographic():
    inst = x3c_to_mft(X3cInstance(SIX, ()))
    keys = [bits(s) for s in inst.scenarios]
    assert keys == sorted(keys)
