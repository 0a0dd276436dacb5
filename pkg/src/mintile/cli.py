"""Command-line front end.

Exit codes: 0 success or feasible, 2 infeasible or over budget, 1 error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import exact, ilp
from .approx import approximate
from .errors import MintileError, UniverseTooLarge
from .feasibility import is_feasible
from .generators import planted_partition, random_instance
from .kernels import BACKEND
from .model import (
    Instance,
    instance_to_obj,
    parse_instance,
    parse_tileset,
    serialize_instance,
    serialize_tileset,
    tileset_to_obj,
)
from .reductions import parse_exact_cover, x3c_to_mft, xdc_to_mft

log = logging.getLogger("mintile")

EXIT_OK, EXIT_ERROR, EXIT_NO = 0, 1, 2
ALGORITHMS = ("dp", "brute", "approx", "ilp-pattern", "ilp-hall")
RATIO_BOUND = Fraction(4, 3)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _warn_cap(name: str, value: int, default: int, mib_per_unit=None) -> None:
    if value > default:
        extra = f" (about {mib_per_unit(value):.0f} MiB)" if mib_per_unit else ""
        log.warning("%s raised to %d above default %d%s", name, value, default, extra)


def _min_ilp_budget(inst: Instance, build, lower: int, upper: int, node_limit: int):
    """Smallest budget in ``[lower, upper]`` whose model is feasible."""
    for budget in range(lower, upper + 1):
        model = build(inst.with_budget(budget))
        sol = ilp.solve_small(model, node_limit=node_limit)
        if sol is not None:
            return budget, model, sol
    return None, None, None


def _hall_bounds(inst: Instance) -> tuple[int, int]:
    scen = inst.demand_scenarios()
    lower = max(s.total() for s in scen)
    per_symbol = [0] * inst.n
    for s in scen:
        for v, c in s.demand:
            per_symbol[v] = max(per_symbol[v], c)
    return lower, max(lower, sum(per_symbol))


def solve_instance(inst: Instance, algorithm: str, caps: dict, node_limit: int = ilp.NODE_LIMIT):
    """Run one algorithm; returns ``(report, tileset or None)``."""
    report: dict = {"algorithm": algorithm}
    ts: Tileset | None = None
    budget = inst.budget
    if algorithm == "dp":
        sol = exact.solve_dp(inst, cap=caps["dp"])
        ts = sol.tileset
        report["opt"] = sol.opt
        report["partition"] = sol.partition.to_obj(inst)
    elif algorithm == "brute":
        opt, part = exact.solve_bruteforce(inst, cap=caps["brute"])
        ts = exact.partition_to_tileset(part)
        report["opt"] = opt
        report["partition"] = part.to_obj(inst)
    elif algorithm == "approx":
        ts = approximate(inst)
    elif algorithm == "ilp-pattern":
        build = lambda i: ilp.build_pattern_ilp(i, cap=caps["pattern"])  # noqa: E731
        lower, upper = math.ceil(inst.n / 2), inst.n - 1
        if budget is not None:
            lower = upper = budget
        found, model, sol = _min_ilp_budget(inst, build, lower, upper, node_limit)
        if found is not None:
            ts = ilp.pattern_solution_to_tileset(inst, model, sol)
            if budget is None:
                report["opt"] = found
    elif algorithm == "ilp-hall":
        build = lambda i: ilp.build_hall_ilp(i, cap=caps["hall"], demand_only=True)  # noqa: E731
        lower, upper = _hall_bounds(inst)
        if budget is not None:
            lower = upper = budget
        found, model, sol = _min_ilp_budget(inst, build, lower, upper, node_limit)
        if found is not None:
            ts = ilp.hall_solution_to_tileset(model, sol)
            if budget is None:
                report["opt"] = found
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")

    if ts is None:
        report.update(feasible=False, size=None, tiles=None, verified=False)
    else:
        verdict = is_feasible(ts, inst)
        report.update(
            feasible=True,
            size=len(ts),
            tiles=tileset_to_obj(ts, inst),
            verified=verdict.feasible,
        )
        if not verdict.feasible:
            raise MintileError(f"internal error: {algorithm} produced an infeasible tileset")
        report["_certificate"] = verdict.certificate
    if budget is not None:
        report["budget"] = budget
        report["within_budget"] = ts is not None and len(ts) <= budget
    return report, ts


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    if args.budget is not None:
        inst = inst.with_budget(args.budget)
    caps = {"dp": args.dp_cap, "brute": args.brute_cap, "pattern": args.pattern_cap, "hall": args.hall_cap}
    _warn_cap("dp cap", args.dp_cap, exact.DP_CAP, lambda n: 6 * 2**n / 2**20)
    _warn_cap("brute cap", args.brute_cap, exact.BRUTE_CAP)
    _warn_cap("pattern cap", args.pattern_cap, ilp.PATTERN_CAP)
    _warn_cap("hall cap", args.hall_cap, ilp.HALL_CAP)
    start = time.perf_counter()
    report, _ = solve_instance(inst, args.algorithm, caps, args.node_limit)
    cert = report.pop("_certificate", None)
    if args.certificates and cert is not None:
        report["certificates"] = cert.to_obj(inst)
    if not args.no_timing:
        report["wall_time"] = round(time.perf_counter() - start, 6)
    report["backend"] = BACKEND
    _write(args.output, _dump(report))
    if inst.budget is not None and not report["within_budget"]:
        return EXIT_NO
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    ts = parse_tileset(_read(args.tileset), inst)
    verdict = is_feasible(ts, inst)
    if verdict.feasible:
        _write(args.output, _dump({"feasible": True, "size": len(ts),
                                   "certificates": verdict.certificate.to_obj(inst)}))
        return EXIT_OK
    i = verdict.failing_scenario
    scen = inst.demand_scenarios()[i]
    _write(args.output, _dump({
        "feasible": False,
        "size": len(ts),
        "failing_scenario": i,
        "scenario": [{"symbol": inst.symbols[s], "count": c} for s, c in scen.demand],
    }))
    return EXIT_NO


def cmd_reduce(args) -> int:
    src = parse_exact_cover(_read(args.input))
    if args.source == "x3c":
        inst = x3c_to_mft(src)
    else:
        inst = xdc_to_mft(src.universe, src.sets, args.d)
    for line in inst.report:
        log.info("%s", line)
    _write(args.output, serialize_instance(inst))
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "random":
        inst = random_instance(args.n, args.m, args.max_size, args.seed)
    else:
        sizes = [int(s) for s in args.parts.split(",")]
        inst, ts, opt_upper = planted_partition(sum(sizes), sizes, args.seed)
        if args.tileset_out:
            _write(args.tileset_out, serialize_tileset(ts, inst))
        log.info("planted tileset has %d tiles (upper bound on OPT)", opt_upper)
    _write(args.output, serialize_instance(inst))
    return EXIT_OK


def cmd_export_ilp(args) -> int:
    inst = parse_instance(_read(args.instance))
    if args.budget is not None:
        inst = inst.with_budget(args.budget)
    if args.kind == "pattern":
        model = ilp.build_pattern_ilp(inst, cap=args.cap or ilp.PATTERN_CAP)
    else:
        model = ilp.build_hall_ilp(inst, cap=args.cap or ilp.HALL_CAP, demand_only=args.demand_only)
    text = ilp.export_lp(model) if args.format == "lp" else ilp.model_to_json(model)
    _write(args.output, text)
    return EXIT_OK


def _bench_instances(config: dict):
    for fi, fam in enumerate(config.get("families", [])):
        gen = fam.get("generator", "random")
        seed0 = int(fam.get("seed", 0))
        for j in range(int(fam.get("count", 1))):
            seed = seed0 + j
            if gen == "random":
                yield fi, seed, lambda f=fam, s=seed: random_instance(f["n"], f["m"], f["max_size"], s)
            elif gen == "planted":
                sizes = list(fam["parts"])
                yield fi, seed, lambda z=sizes, s=seed: planted_partition(sum(z), z, s)[0]
            else:
                raise MintileError(f"unknown generator {gen!r}")


def bench_row(job):
    index, family, seed, inst_obj, dp_cap = job
    from .model import instance_from_obj

    inst = instance_from_obj(inst_obj)
    opt = exact.solve_dp(inst, cap=dp_cap).opt
    ts = approximate(inst)
    if not is_feasible(ts, inst).feasible:
        raise MintileError(f"approximation infeasible on instance {index}")
    ratio = Fraction(len(ts), opt)
    return {"index": index, "family": family, "seed": seed, "n": inst.n, "m": inst.m,
            "opt": opt, "approx": len(ts), "ratio": str(ratio)}


def run_bench(config: dict, workers: int = 1, dp_cap: int = exact.DP_CAP) -> dict:
    jobs = []
    for index, (family, seed, make) in enumerate(_bench_instances(config)):
        inst = make()
        if inst.n > dp_cap:
            raise UniverseTooLarge(inst.n, dp_cap)
        jobs.append((index, family, seed, instance_to_obj(inst), dp_cap))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(bench_row, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        rows = [bench_row(j) for j in jobs]
    max_ratio = max((Fraction(r["ratio"]) for r in rows), default=None)
    return {
        "rows": rows,
        "count": len(rows),
        "max_ratio": None if max_ratio is None else str(max_ratio),
        "within_bound": max_ratio is None or max_ratio <= RATIO_BOUND,
    }


def cmd_bench(args) -> int:
    config = json.loads(_read(args.config)) if args.config else {}
    result = run_bench(config, workers=args.workers, dp_cap=args.dp_cap)
    _write(args.output, _dump(result))
    if not result["within_bound"]:
        log.error("approximation ratio %s exceeds 4/3", result["max_ratio"])
        return EXIT_ERROR
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mintile", description="Minimum Feasible Tileset toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance")
    s.add_argument("instance", help="instance JSON path or - for stdin")
    s.add_argument("--algorithm", "-a", choices=ALGORITHMS, default="dp")
    s.add_argument("--budget", type=int, help="override the instance budget")
    s.add_argument("--dp-cap", type=int, default=exact.DP_CAP)
    s.add_argument("--brute-cap", type=int, default=exact.BRUTE_CAP)
    s.add_argument("--pattern-cap", type=int, default=ilp.PATTERN_CAP)
    s.add_argument("--hall-cap", type=int, default=ilp.HALL_CAP)
    s.add_argument("--node-limit", type=int, default=ilp.NODE_LIMIT)
    s.add_argument("--certificates", action="store_true", help="include feasibility certificates")
    s.add_argument("--no-timing", action="store_true", help="omit wall time for byte-stable output")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a tileset against an instance")
    v.add_argument("instance")
    v.add_argument("tileset")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reduce", help="build an instance from an exact cover instance")
    r.add_argument("input")
    r.add_argument("--from", dest="source", choices=("x3c", "xdc"), default="x3c")
    r.add_argument("--d", type=int, default=3, help="set size for --from xdc")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("kind", choices=("random", "planted"))
    g.add_argument("--n", type=int, default=8)
    g.add_argument("--m", type=int, default=10)
    g.add_argument("--max-size", type=int, default=3)
    g.add_argument("--parts", default="2,3", help="comma-separated planted part sizes")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tileset-out", help="where to write the planted tileset")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("export-ilp", help="write an ILP model")
    e.add_argument("instance")
    e.add_argument("--kind", choices=("pattern", "hall"), default="pattern")
    e.add_argument("--format", choices=("lp", "json"), default="lp")
    e.add_argument("--budget", type=int)
    e.add_argument("--cap", type=int)
    e.add_argument("--demand-only", action="store_true", help="Hall rows only for demanded subsets")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_export_ilp)

    b = sub.add_parser("bench", help="approximation ratio table against the exact DP")
    b.add_argument("config", nargs="?", help="bench config JSON (omit for an empty run)")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--dp-cap", type=int, default=exact.DP_CAP)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (MintileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
