import json
from fractions import Fraction

import pytest

from mintile import cli
from mintile.generators import random_instance
from mintile.model import serialize_instance


@pytest.fixture
def run(tmp_path, capsys):
    def go(*argv):
        code = cli.main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err

    return go


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return p


TWO = {"symbols": ["a", "b"], "scenarios": [["a"], ["b"]]}


def test_solve_two_symbols(run, tmp_path):
    code, out, _ = run("solve", write(tmp_path, "i.json", TWO), "--algorithm", "dp")
    rep = json.loads(out)
    assert code == 0 and rep["opt"] == 1 and rep["verified"]
    assert {"algorithm", "size", "tiles", "partition", "wall_time"} <= set(rep)


@pytest.mark.parametrize("seed", range(5))
def test_approx_vs_dp(run, tmp_path, seed):
    path = tmp_path / "r.json"
    path.write_text(serialize_instance(random_instance(8, 10, 3, seed)))
    dp = json.loads(run("solve", path, "-a", "dp")[1])
    ap = json.loads(run("solve", path, "-a", "approx")[1])
    assert ap["size"] >= dp["opt"] and 3 * ap["size"] <= 4 * dp["opt"]


def test_all_algorithms_agree(run, tmp_path):
    doc = {"symbols": list("abcde"), "scenarios": [["a", "b"], ["c", "d", "e"]]}
    path = write(tmp_path, "i.json", doc)
    sizes = {}
    for algo in cli.ALGORITHMS:
        code, out, _ = run("solve", path, "-a", algo, "--no-timing")
        rep = json.loads(out)
        assert code == 0 and rep["verified"] and "wall_time" not in rep
        sizes[algo] = rep["size"]
    assert sizes["dp"] == sizes["brute"] == sizes["ilp-pattern"] == sizes["ilp-hall"] == 3


def test_budget_below_opt(run, tmp_path):
    doc = dict(TWO, symbols=["a", "b", "c"], scenarios=[["a", "b"], ["c"]])
    code, out, _ = run("solve", write(tmp_path, "i.json", doc), "--budget", "0")
    assert code == 2 and json.loads(out)["within_budget"] is False
    code, out, _ = run("solve", write(tmp_path, "j.json", doc), "-a", "ilp-pattern", "--budget", "0")
    assert code == 2 and json.loads(out)["feasible"] is False


def test_solve_deterministic(run, tmp_path):
    path = tmp_path / "r.json"
    path.write_text(serialize_instance(random_instance(7, 9, 3, 3)))
    outs = {run("solve", path, "-a", "approx", "--no-timing", "--certificates")[1] for _ in range(2)}
    assert len(outs) == 1


def test_errors_exit_one(run, tmp_path):
    code, _, err = run("solve", write(tmp_path, "bad.json", "{"))
    assert code == 1 and "line" in err
    code, _, err = run("solve", tmp_path / "missing.json")
    assert code == 1
    many = serialize_instance(random_instance(10, 12, 3, 0))
    code, _, err = run("solve", write(tmp_path, "m.json", many), "-a", "brute")
    assert code == 1 and "universe size" in err


def test_verify(run, tmp_path):
    inst = write(tmp_path, "i.json", {"symbols": ["a", "b", "c"], "scenarios": [["a", "b"], ["c"]]})
    bad = write(tmp_path, "t.json", {"tiles": [["a", "b"]]})
    code, out, _ = run("verify", inst, bad)
    assert code == 2 and json.loads(out)["failing_scenario"] == 0
    good = write(tmp_path, "g.json", {"tiles": [["a", "c"], ["b", "c"]]})
    code, out, _ = run("verify", inst, good)
    assert code == 0 and len(json.loads(out)["certificates"]) == 2


def test_verify_planted_and_dp_witness(run, tmp_path):
    inst, tiles = tmp_path / "p.json", tmp_path / "pt.json"
    assert run("gen", "planted", "--parts", "3,2,3", "--seed", 9, "-o", inst, "--tileset-out", tiles)[0] == 0
    assert run("verify", inst, tiles)[0] == 0
    rep = json.loads(run("solve", inst)[1])
    w = write(tmp_path, "w.json", {"tiles": rep["tiles"]})
    assert run("verify", inst, w)[0] == 0


def test_gen_random_seeded(run, tmp_path):
    a = run("gen", "random", "--n", 6, "--m", 5, "--seed", 3)[1]
    b = run("gen", "random", "--n", 6, "--m", 5, "--seed", 3)[1]
    assert a == b and json.loads(a)["symbols"]


def test_reduce(run, tmp_path):
    x3c = write(tmp_path, "x.json", {"universe": [1, 2, 3, 4, 5, 6], "sets": [[1, 2, 3], [4, 5, 6]]})
    out = tmp_path / "r.json"
    assert run("reduce", x3c, "-o", out)[0] == 0
    code, rep, _ = run("solve", out)
    assert code == 0 and json.loads(rep)["opt"] == 4
    xdc = write(tmp_path, "y.json", {"universe": list(range(8)), "sets": [[0, 1, 2, 3], [4, 5, 6, 7]]})
    code, text, _ = run("reduce", xdc, "--from", "xdc", "--d", 4)
    assert code == 0 and json.loads(text)["budget"] == 6
    bad = write(tmp_path, "z.json", {"universe": [1, 2, 3], "sets": [[1, 2]]})
    assert run("reduce", bad)[0] == 1


def test_export_ilp(run, tmp_path):
    path = write(tmp_path, "i.json", TWO)
    code, text, _ = run("export-ilp", path, "--budget", 1)
    assert code == 0 and text.startswith("\\") and "Subject To" in text
    code, text, _ = run("export-ilp", path, "--budget", 1, "--kind", "hall", "--format", "json")
    model = json.loads(text)
    assert len(model["variables"]) == 1 and len(model["constraints"]) == 1 + 2 * 4
    assert run("export-ilp", path)[0] == 1


def test_bench(run, tmp_path):
    cfg = write(tmp_path, "b.json", {"families": [
        {"generator": "random", "n": 8, "m": 10, "max_size": 3, "count": 100, "seed": 1},
        {"generator": "planted", "parts": [2, 2, 3], "count": 5},
    ]})
    code, out, _ = run("bench", cfg, "--workers", 2)
    res = json.loads(out)
    assert code == 0 and res["count"] == 105
    assert [r["index"] for r in res["rows"]] == list(range(105))
    assert Fraction(res["max_ratio"]) <= Fraction(4, 3)
    for r in res["rows"]:
        assert Fraction(r["ratio"]) == Fraction(r["approx"], r["opt"])
        if r["approx"] == r["opt"]:
            assert r["ratio"] == "1"
    serial = json.loads(run("bench", cfg)[1])
    assert serial == res


def test_bench_empty(run, tmp_path):
    code, out, _ = run("bench", write(tmp_path, "e.json", {}))
    assert code == 0 and json.loads(out)["rows"] == []


def test_stdin(run, monkeypatch, tmp_path):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(TWO)))
    code, out, _ = run("solve", "-")
    assert code == 0 and json.loads(out)["opt"] == 1
