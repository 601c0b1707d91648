"""fracplane command line: build, bound, verify, tile, blocks, export-lp.

Exit codes: 0 success, 1 usage error, 2 operational failure, 3 a
mathematical check failed.  JSON output is deterministic for a fixed
command line (keys sorted, rationals as {num, den}, no timings).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path
from typing import Optional

from . import discharge as dc
from . import export, fraclp, indsets
from . import tiling as tl
from .udgraph import parse_selector

EXIT_OK, EXIT_USAGE, EXIT_FAILURE, EXIT_FALSIFIED = 0, 1, 2, 3
OUT_DIR_ENV = "FRACPLANE_OUT_DIR"
# graphs above this many vertices need --allow-long for LP work
LP_VERTEX_CAP = 250


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def emit(args, text: str, name: str) -> None:
    """Write to --output, else into $FRACPLANE_OUT_DIR, else to stdout."""
    out_dir = os.environ.get(OUT_DIR_ENV)
    path: Optional[Path] = None
    if args.output:
        path = Path(args.output)
        if out_dir and not path.is_absolute():
            path = Path(out_dir) / path
    elif out_dir:
        path = Path(out_dir) / name
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _slug(sel: str) -> str:
    return sel.replace(":", "")


def _family(sel: str):
    kind, _, arg = sel.partition(":")
    if kind not in ("core", "gd", "gpd") or not arg.isdigit():
        raise UsageError(f"{sel!r} is not a lattice family (core:d, gd:d, gpd:d)")
    return kind, int(arg)


def _orbits(g, name: str):
    if name == "trivial":
        return None
    if name == "geometric":
        return fraclp.geometric_orbits(g)
    return fraclp.shared_spindle_orbits(g)


def _population(args):
    if args.exhaustive and args.samples is not None:
        raise UsageError("choose --exhaustive or --samples, not both")
    if args.samples is not None and args.seed is None:
        raise UsageError("--samples needs --seed")
    if not args.exhaustive and args.samples is None:
        raise UsageError("choose --exhaustive or --samples N --seed S")


def _jobs(args) -> int:
    return args.jobs if args.jobs else (os.cpu_count() or 1)


# -- subcommands ---------------------------------------------------------------------


def cmd_build(args) -> int:
    g = parse_selector(args.graph)
    fmt = args.format or "json"
    if fmt == "json":
        emit(args, dumps(export.graph_json(g)), f"{_slug(args.graph)}.json")
    elif fmt == "dimacs":
        emit(args, export.dimacs(g), f"{_slug(args.graph)}.dimacs")
    elif fmt == "svg":
        emit(args, export.graph_svg(g), f"{_slug(args.graph)}.svg")
    else:
        raise UsageError(f"build cannot write {fmt}")
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.discharge:
        kind, d = _family(args.graph)
        if kind != "gpd" or d < 4:
            raise UsageError("--discharge needs gpd:D with D >= 4")
        _population(args)
        rep = dc.compute_bound(list(range(4, d + 1)), samples=args.samples or 0,
                               seed=args.seed or 0, exhaustive=args.exhaustive, jobs=_jobs(args))
        emit(args, dumps(rep.to_json()), f"bound-{_slug(args.graph)}.json")
        return EXIT_OK if rep.ok and rep.nondecreasing else EXIT_FALSIFIED
    g = parse_selector(args.graph)
    if g.n > LP_VERTEX_CAP and not args.allow_long:
        raise UsageError(f"{g.n} vertices; pass --allow-long for LPs above {LP_VERTEX_CAP} vertices")
    res = fraclp.weight_lp_bound(g, _orbits(g, args.orbits), seed=args.seed or 0)
    out = res.to_json()
    out.update({"graph": args.graph, "orbits": args.orbits, "vertices": g.n})
    emit(args, dumps(out), f"bound-{_slug(args.graph)}.json")
    return EXIT_OK


def cmd_verify(args) -> int:
    kind, d = _family(args.graph)
    fmt = args.format or "json"
    jobs = _jobs(args)
    if args.simple:
        if kind != "gd":
            raise UsageError("--simple runs on gd:d")
        _population(args)
        rep = dc.simple_verify(d, args.exhaustive, args.samples or 0, args.seed or 0, jobs)
        emit(args, dumps(rep.to_json()), f"verify-simple-{_slug(args.graph)}.json")
        return EXIT_OK if rep.ok else EXIT_FALSIFIED
    _population(args)
    if kind == "core":
        core = parse_selector(args.graph)
        if args.exhaustive:
            if d >= 4 and not args.allow_long:
                raise UsageError("exhaustive tiling of core:4 and up takes long; pass --allow-long")
            rep = tl.survey_exhaustive(core)
        else:
            rep = tl.survey_samples(core, args.samples, args.seed)
        emit(args, dumps(rep.to_json()), f"verify-{_slug(args.graph)}.json")
        return EXIT_OK if rep.ok else EXIT_FALSIFIED
    if kind != "gpd":
        raise UsageError("verify runs on core:d, gpd:d, or gd:d with --simple")
    if args.exhaustive and d >= 3 and not args.allow_long:
        raise UsageError("exhaustive discharging above gpd:2 takes long; pass --allow-long")
    rep = dc.verify(d, args.exhaustive, args.samples or 0, args.seed or 0, jobs)
    if fmt == "csv":
        emit(args, export.csv_text([rep.csv_row()]), f"verify-{_slug(args.graph)}.csv")
    else:
        emit(args, dumps(rep.to_json()), f"verify-{_slug(args.graph)}.json")
    return EXIT_OK if rep.ok else EXIT_FALSIFIED


def cmd_tile(args) -> int:
    kind, d = _family(args.graph)
    if kind == "gd":
        raise UsageError("tile runs on core:d or gpd:d")
    seed = args.seed or 0
    rng = random.Random(f"{seed}:0")
    g = dc.discharge_context(d).g if kind == "gpd" else parse_selector(args.graph)
    core_set = indsets.random_maximal_core_set(g, rng).vertices
    tiling = tl.build_tiling(g, core_set)
    tl.verify_tiling(tiling)
    labels = None
    out = tiling.to_json()
    if kind == "gpd":
        ctx = dc.discharge_context(d)
        run = dc.DischargeRun(ctx, indsets.complete_with_spindles(g, core_set, rng), tiling).run()
        excess = {ti: run.excess(ti) for ti in range(len(tiling.tiles))}
        labels = {ti: f"{t.type} {excess[ti]}" for ti, t in enumerate(tiling.tiles)}
        out["final_excess"] = [export.q(excess[ti]) for ti in range(len(tiling.tiles))]
        out["violations"] = run.report().violations
    if (args.format or "json") == "svg":
        emit(args, export.tiling_svg(tiling, labels), f"tile-{_slug(args.graph)}-{seed}.svg")
    else:
        emit(args, dumps(out), f"tile-{_slug(args.graph)}-{seed}.json")
    return EXIT_OK


def cmd_blocks(args) -> int:
    out = {
        "five_block": [b.to_json() for b in dc.five_blocks(tl.TEMPLATES["T2"].corners)],
        "six_block": [b.to_json() for b in dc.six_blocks(tl.TEMPLATES["T6"].corners)],
    }
    ok = True
    if args.check:
        reps = dc.verify_block_claims()
        out["claims"] = {k: r.to_json() for k, r in sorted(reps.items())}
        ok = all(r.ok for r in reps.values())
    emit(args, dumps(out), "blocks.json")
    return EXIT_OK if ok else EXIT_FALSIFIED


def cmd_export_lp(args) -> int:
    g = parse_selector(args.graph)
    if g.n > LP_VERTEX_CAP and not args.allow_long:
        raise UsageError(f"{g.n} vertices; pass --allow-long for LPs above {LP_VERTEX_CAP} vertices")
    orbits = _orbits(g, args.orbits) or fraclp.OrbitPartition.trivial(g.n)
    lp = fraclp.RationalLP()
    for k, block in enumerate(orbits.blocks):
        lp.add_var(f"w{k}", obj=len(block))
    rows = set()
    for s in indsets.enumerate_mis(g):
        row = {}
        for v in s.vertices:
            k = orbits.index[v]
            row[k] = row.get(k, 0) + 1
        key = tuple(sorted(row.items()))
        if key not in rows:
            rows.add(key)
            if len(rows) > args.row_cap:
                raise fraclp.RowCapExceeded(f"more than {args.row_cap} distinct rows; raise --row-cap")
    for key in sorted(rows):
        lp.add_row(dict(key), fraclp.LE, 1)
    emit(args, lp.to_lp_text(), f"{_slug(args.graph)}.lp")
    return EXIT_OK


# -- parser --------------------------------------------------------------------------------


def build_parser() -> Parser:
    p = Parser(prog="fracplane", description="Unit-distance graphs, fractional chromatic "
               "number bounds and machine-checked discharging.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    def common(sp, formats):
        sp.add_argument("graph", help="moser | golomb | fisher-ullman | core:d | gd:d | gpd:d")
        sp.add_argument("--format", choices=formats)
        sp.add_argument("-o", "--output", help=f"output file (relative to ${OUT_DIR_ENV} if set)")
        sp.add_argument("--allow-long", action="store_true", help="lift the guards on long jobs")

    def population(sp):
        sp.add_argument("--exhaustive", action="store_true")
        sp.add_argument("--samples", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--jobs", type=int, default=0, help="worker processes (default: all CPUs)")

    sp = sub.add_parser("build", help="construct a graph and write it out")
    common(sp, ["json", "dimacs", "svg"])
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("bound", help="exact weight LP bound on the fractional chromatic number")
    common(sp, ["json"])
    sp.add_argument("--orbits", choices=["trivial", "geometric", "shared-spindle"], default="trivial")
    sp.add_argument("--discharge", action="store_true",
                    help="discharging bound over gpd:4 .. gpd:D instead of an LP")
    population(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("verify", help="tiling and discharging checks over independent sets")
    common(sp, ["json", "csv"])
    population(sp)
    sp.add_argument("--simple", action="store_true", help="the two-rule argument on gd:d")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("tile", help="tile one random maximal core set")
    common(sp, ["json", "svg"])
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_tile)

    sp = sub.add_parser("blocks", help="dump the spindle block templates")
    sp.add_argument("--check", action="store_true", help="also run the exhaustive block checks")
    sp.add_argument("--format", choices=["json"])
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_blocks)

    sp = sub.add_parser("export-lp", help="write the weight LP over all maximal independent sets")
    common(sp, ["lp"])
    sp.add_argument("--orbits", choices=["trivial", "geometric", "shared-spindle"], default="trivial")
    sp.add_argument("--row-cap", type=int, default=20000)
    sp.set_defaults(func=cmd_export_lp)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fracplane: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except tl.TilingError as exc:
        print(f"fracplane: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    except ValueError as exc:
        print(f"fracplane: {exc}", file=sys.stderr)
        return EXIT_USAGE if "selector" in str(exc) else EXIT_FAILURE
    except (fraclp.LPError, dc.DischargeError, OSError) as exc:
        print(f"fracplane: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
