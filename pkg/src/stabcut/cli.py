"""Command-line front end.

Every subcommand writes one JSON document to stdout and diagnostics to
stderr.  Exit status: 0 yes/ok, 1 no/unsat, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time

from . import cstab2, gadgets, generators, oracle, partition, rayshoot, twdp
from .geom import Polygon, find_gates, is_general_position, is_thin, validate
from .pixelation import Pixelation
from .render import render_svg

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    def __init__(self, message: str, details=None):
        super().__init__(message)
        self.details = details


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None


def _write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _polygon(path: str, check: bool = True) -> Polygon:
    try:
        poly = Polygon.from_json(_read_json(path))
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if check:
        diag = validate(poly)
        if not diag.ok:
            raise InputError(f"{path}: polygon is invalid", diag.to_json())
    return poly


def _partition(poly: Polygon, path: str) -> partition.ConformingPartition:
    try:
        return partition.read_partition(poly, _read_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


# -- subcommands --------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        poly = Polygon.from_json(_read_json(args.polygon))
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{args.polygon}: {exc}") from None
    diag = validate(poly)
    _emit(diag.to_json())
    return EXIT_YES if diag.ok else EXIT_NO


def cmd_pixelate(args) -> int:
    poly = _polygon(args.polygon)
    pix = Pixelation(poly)
    out = {
        "pixels": len(pix.pixels),
        "classes": len(pix.classes),
        "strip_classes": len(pix.strip_classes),
        "max_cross": pix.max_cross,
        "reflex_vertices": len(poly.structure.reflex),
        "reflex_segments": len(poly.structure.segments),
        "thin": is_thin(poly),
        "general_position": is_general_position(poly),
        "gates": len(find_gates(poly)),
    }
    if not args.stats:
        out["pixel_rects"] = [list(p.rect) for p in pix.pixels]
    _emit(out)
    return EXIT_YES


def cmd_eval(args) -> int:
    poly = _polygon(args.polygon)
    cp = _partition(poly, args.partition)
    problems = partition.check_conforming(poly, cp.chosen)
    out = {"conforming": not problems, "problems": problems}
    if not problems:
        out["stabbing"] = partition.stabbing_number_conforming(Pixelation(poly), cp).to_json()
        out["minimal"] = partition.is_minimal(poly, cp)
    _emit(out)
    return EXIT_YES if not problems else EXIT_NO


def _witness_out(poly, cp, path, out) -> None:
    if cp is not None:
        out["witness"] = cp.to_json()
        if path:
            _write_json(path, cp.to_json())


def cmd_cstab2(args) -> int:
    poly = _polygon(args.polygon)
    out = {"method": args.method}
    if args.method == "sat":
        cp = cstab2.decide_cstab2_sat(poly)
    else:
        res = cstab2.decide_cstab2_fast_detail(poly)
        cp = res.witness
        out.update(outcome=res.outcome, residual_variables=res.residual_vars,
                   fixed=len(res.status.fixed), impossible=len(res.status.impossible))
        if args.trace:
            out["trace"] = res.status.trace_json()
    out["answer"] = "yes" if cp is not None else "no"
    _witness_out(poly, cp, args.emit_witness, out)
    _emit(out)
    return EXIT_YES if cp is not None else EXIT_NO


def cmd_exact(args) -> int:
    poly = _polygon(args.polygon)
    pix = Pixelation(poly)
    stats = oracle.SearchStats()
    out: dict = {}
    try:
        if args.enumerate_minimal:
            parts = []
            for cp in oracle.enumerate_minimal(poly, args.k, args.budget, pix=pix, stats=stats):
                parts.append({"stabbing": partition.stabbing_number_conforming(pix, cp).value, **cp.to_json()})
            out.update(count=len(parts), partitions=parts)
            code = EXIT_YES if parts else EXIT_NO
        elif args.k is not None:
            cp = oracle.decide_cstab_k_exact(poly, args.k, args.budget, pix=pix, stats=stats)
            out["answer"] = "yes" if cp is not None else "no"
            _witness_out(poly, cp, None, out)
            code = EXIT_YES if cp is not None else EXIT_NO
        else:
            k, cp = oracle.min_conforming_stabbing(poly, args.budget, pix=pix, stats=stats)
            out["stabbing_number"] = k
            _witness_out(poly, cp, None, out)
            code = EXIT_YES
    except oracle.BudgetExceeded as exc:
        out.update(error="budget exceeded", lower_bound=exc.lower, incumbent=exc.incumbent_value)
        code = EXIT_BUDGET
    out["nodes"] = stats.nodes
    out["solutions"] = stats.solutions
    _emit(out)
    return code


def cmd_dp(args) -> int:
    poly = _polygon(args.polygon)
    try:
        res = twdp.decide_cstab_k_dp(poly, args.k, max_states=args.max_states)
    except twdp.StateOverflow as exc:
        _emit({"error": "state limit exceeded", "bag_size": exc.bag_size, "states": exc.states})
        return EXIT_BUDGET
    if args.td_out:
        twdp.write_td(res.td, args.td_out)
    out = {"answer": "yes" if res.witness is not None else "no", "width": res.width,
           "heuristic": res.td.heuristic, "max_states": res.max_states, "state_bound": res.bound}
    _witness_out(poly, res.witness, None, out)
    _emit(out)
    return EXIT_YES if res.witness is not None else EXIT_NO


def cmd_gatefree(args) -> int:
    poly = _polygon(args.polygon)
    try:
        cp = twdp.decide_cstab_k_simple_gatefree(poly, args.k, args.cutoff, args.max_states)
    except twdp.StateOverflow as exc:
        _emit({"error": "state limit exceeded", "bag_size": exc.bag_size, "states": exc.states})
        return EXIT_BUDGET
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {"answer": "yes" if cp is not None else "no",
           "cutoff": twdp.cutoff_length(args.k) if args.cutoff is None else args.cutoff,
           "max_reflex_length": twdp.max_reflex_length(poly)}
    _witness_out(poly, cp, None, out)
    _emit(out)
    return EXIT_YES if cp is not None else EXIT_NO


def cmd_gen(args) -> int:
    if args.rpm:
        rpm_data = gadgets.FOUR_VARIABLE_RPM if args.rpm == "example" else _read_json(args.rpm)
        try:
            rpm = gadgets.RpmInstance.from_json(rpm_data)
            poly, pm = gadgets.build_hardness_polygon(rpm)
        except (KeyError, ValueError, TypeError, gadgets.LayoutError) as exc:
            raise InputError(f"rpm: {exc}") from None
        out = {"vertices": poly.n, "gadgets": len(pm.gadgets), "portmap": pm.to_json()}
        if args.out:
            _write_json(args.out, poly.to_json())
        else:
            out["polygon"] = poly.to_json()
        if args.witness:
            assignment = _read_json(args.witness)
            try:
                cp = gadgets.witness_partition(poly, pm, assignment)
            except ValueError as exc:
                raise InputError(str(exc)) from None
            out["witness_stabbing"] = gadgets.verify_witness(poly, cp)
            out["witness"] = cp.to_json()
        _emit(out)
        return EXIT_YES
    if args.family:
        try:
            polys = generators.generate_corpus(args.family, args.count, args.seed, args.max_reflex)
        except (ValueError, RuntimeError) as exc:
            raise InputError(str(exc)) from None
        _emit({"family": args.family, "seed": args.seed, "polygons": [p.to_json() for p in polys]})
        return EXIT_YES
    raise InputError("gen needs --rpm or --family")


def cmd_render(args) -> int:
    poly = _polygon(args.polygon)
    cp = _partition(poly, args.partition) if args.partition else None
    stab = None
    if cp is not None and args.witness_stab:
        stab = partition.stabbing_number_conforming(Pixelation(poly), cp).witness
    svg = render_svg(poly, cp, stab, scale=args.scale)
    with open(args.svg, "w") as fh:
        fh.write(svg)
    _emit({"svg": args.svg, "bytes": len(svg.encode())})
    return EXIT_YES


def _crossval_one(job):
    index, poly_json, k_dp = job
    poly = Polygon.from_json(poly_json)
    verdicts, timings = {}, {}
    for name, fn in (
        ("oracle", lambda: oracle.decide_cstab_k_exact(poly, 2)),
        ("sat", lambda: cstab2.decide_cstab2_sat(poly)),
        ("fast", lambda: cstab2.decide_cstab2_fast(poly)),
        ("dp", lambda: twdp.decide_cstab_k_dp(poly, 2).witness),
    ):
        t0 = time.perf_counter()
        cp = fn()
        timings[name] = time.perf_counter() - t0
        if cp is not None and partition.stabbing_number(poly, cp.chosen) > 2:
            verdicts[name] = "bad-witness"
        else:
            verdicts[name] = "yes" if cp is not None else "no"
    return index, verdicts, timings


def cmd_crossval(args) -> int:
    rng = random.Random(f"crossval:{args.seed}")
    families = ["random", "random-holes", "thin", "general-position"]
    polys = [generators.generate(families[i % len(families)], rng, args.max_reflex) for i in range(args.count)]
    jobs = [(i, p.to_json(), 2) for i, p in enumerate(polys)]
    threads = max(1, int(os.environ.get("STABCUT_THREADS", "1") or 1))
    if threads > 1:
        from multiprocessing import Pool

        with Pool(threads) as pool:
            results = pool.map(_crossval_one, jobs)
    else:
        results = [_crossval_one(j) for j in jobs]
    results.sort()
    disagreements = []
    totals: dict[str, float] = {}
    yes = 0
    for i, verdicts, timings in results:
        for name, t in timings.items():
            totals[name] = totals.get(name, 0.0) + t
        if len(set(verdicts.values())) != 1:
            disagreements.append({"index": i, "verdicts": verdicts, "polygon": jobs[i][1]})
        yes += verdicts["oracle"] == "yes"
    report = {
        "count": args.count, "seed": args.seed, "yes": yes, "no": args.count - yes,
        "disagreements": disagreements,
        "timings": {k: round(v, 3) for k, v in sorted(totals.items())} if args.timings else None,
    }
    _emit(report)
    return EXIT_YES if not disagreements else EXIT_NO


def cmd_rayshoot_fuzz(args) -> int:
    rep = rayshoot.fuzz(args.ops, args.seed, args.nsegs)
    _emit(rep)
    return EXIT_YES if rep["mismatches"] == 0 else EXIT_NO


def cmd_fixtures(args) -> int:
    from .fixtures import FIXTURES

    os.makedirs(args.out_dir, exist_ok=True)
    polys = {name: make() for name, make in FIXTURES.items()}
    polys["F0"] = gadgets.forcer().polygon
    polys["V1"] = gadgets.variable_gadget().polygon
    polys["S1"] = gadgets.split_gadget().polygon
    polys["C0"] = gadgets.clause_gadget(1, 1, 1, 1, 1).polygon
    written = []
    for name, poly in sorted(polys.items()):
        path = os.path.join(args.out_dir, f"{name}.json")
        _write_json(path, poly.to_json())
        written.append(path)
    _emit({"written": written})
    return EXIT_YES


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stabcut", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def poly_cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("polygon", help="polygon JSON file")
        sp.set_defaults(func=fn)
        return sp

    poly_cmd("validate", cmd_validate, "check polygon conventions")
    sp = poly_cmd("pixelate", cmd_pixelate, "pixel and stab-class statistics")
    sp.add_argument("--stats", action="store_true", help="summary counts only")
    sp = poly_cmd("eval", cmd_eval, "evaluate a partition")
    sp.add_argument("--partition", required=True)
    sp = poly_cmd("cstab2", cmd_cstab2, "decide stabbing number <= 2")
    sp.add_argument("--method", choices=("sat", "fast"), default="fast")
    sp.add_argument("--emit-witness", metavar="FILE")
    sp.add_argument("--trace", action="store_true", help="include the rule flag log")
    sp = poly_cmd("exact", cmd_exact, "exact branch and bound")
    sp.add_argument("--k", type=int)
    sp.add_argument("--enumerate-minimal", action="store_true")
    sp.add_argument("--budget", type=int, help="node budget")
    sp = poly_cmd("dp", cmd_dp, "tree decomposition dynamic program")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--td-out", metavar="FILE")
    sp.add_argument("--max-states", type=int)
    sp = poly_cmd("gatefree", cmd_gatefree, "decision for simple gate-free polygons")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--cutoff", type=int, help="override the segment-length cutoff")
    sp.add_argument("--max-states", type=int)
    sp = poly_cmd("render", cmd_render, "draw an SVG")
    sp.add_argument("--svg", required=True)
    sp.add_argument("--partition")
    sp.add_argument("--witness-stab", action="store_true", help="overlay a maximum stab class")
    sp.add_argument("--scale", type=int, default=20)

    sp = sub.add_parser("gen", help="hardness polygon from a drawing, or a polygon corpus")
    sp.add_argument("--rpm", help='drawing JSON, or "example" for the built-in example')
    sp.add_argument("--out", help="write the polygon here")
    sp.add_argument("--witness", help="assignment JSON to build a stabbing-4 witness for")
    sp.add_argument("--family", choices=generators.FAMILIES + ("thin-gate-free",))
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-reflex", type=int, default=12)
    sp.set_defaults(func=cmd_gen)
    sp = sub.add_parser("crossval", help="compare all stabbing-2 deciders on random polygons")
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-reflex", type=int, default=12)
    sp.add_argument("--timings", action="store_true", help="include wall-clock totals (not deterministic)")
    sp.set_defaults(func=cmd_crossval)
    sp = sub.add_parser("rayshoot-fuzz", help="ray shooter against a linear scan")
    sp.add_argument("--ops", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--nsegs", type=int, default=500)
    sp.set_defaults(func=cmd_rayshoot_fuzz)
    sp = sub.add_parser("fixtures", help="write the built-in polygons as JSON")
    sp.add_argument("--out-dir", default="fixtures")
    sp.set_defaults(func=cmd_fixtures)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_YES
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        json.dump({"error": str(exc), "details": exc.details}, sys.stderr, sort_keys=True)
        sys.stderr.write("\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
