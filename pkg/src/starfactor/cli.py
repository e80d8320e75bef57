"""Command line: ``starfactor {gen,solve,verify,oracle,bench}``.

Exit codes: 0 success/valid, 1 verification failure, 2 input error,
3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import secrets
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import constructions
from .constructions import ceil_sqrt
from .cover import CoverConfig
from .errors import InputError, SolverFailure, StarFactorError
from .io import format_graph, read_graph, read_packing, write_graph, write_packing
from .oracle import DEFAULT_LIMIT, exists_factor, max_factor_size
from .packing import format_packing, verify
from .rng import derive_seed
from .solver import SolverConfig, solve, solve_regular

EXIT_OK, EXIT_INVALID, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2, 3

FAMILIES = ("regular", "min-degree", "lower-bound")

CSV_COLUMNS = [
    "family", "n", "d", "trial", "seed", "vertices", "achieved_ell", "sqrt_d",
    "paper_target_ell", "c_tilde", "upper_bound", "fallback_used", "verified",
    "wall_time_ms", "error",
]


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(32)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def generate(family: str, n: int, d: int, seed: int):
    if family == "regular":
        return constructions.random_regular_graph(n, d, seed)
    if family == "min-degree":
        return constructions.random_min_degree_graph(n, d, seed)
    if family == "lower-bound":
        return constructions.lower_bound_graph(d, n, seed)
    raise InputError(f"unknown family {family!r}")


def cmd_gen(args) -> int:
    seed = _seed(args)
    g = generate(args.family, args.n, args.d, seed)
    if args.out:
        write_graph(g, args.out)
    else:
        sys.stdout.write(format_graph(g))
    print(f"vertices {g.vertex_count} edges {g.edge_count}", file=sys.stderr)
    return EXIT_OK


def _solver_config(args) -> SolverConfig:
    cover = CoverConfig()
    for name in ("c_select", "c_cap", "c_prune", "c_slack"):
        val = getattr(args, name, None)
        if val is not None:
            cover = replace(cover, **{name: val})
    kw = {}
    if getattr(args, "regular_c", None) is not None:
        kw["regular_c"] = args.regular_c
    return SolverConfig(cover=cover, mode=args.mode, seed=args.seed, **kw)


def cmd_solve(args) -> int:
    seed = _seed(args)
    g = read_graph(args.graph)
    d = args.d if args.d is not None else g.min_degree()
    cfg = _solver_config(args)
    run = solve_regular if args.method == "regular" else solve
    try:
        pk, report = run(g, d, cfg)
    except SolverFailure as exc:
        print(f"solver failure in stage {exc.stage}: {exc}", file=sys.stderr)
        print(json.dumps(exc.diagnostics, sort_keys=True, default=str), file=sys.stderr)
        return EXIT_SOLVER
    rep = verify(g, pk, report.achieved_ell, g.vertices())
    if args.out:
        write_packing(pk, args.out)
    else:
        sys.stdout.write(format_packing(pk))
    doc = json.dumps(report.to_dict(), indent=2, sort_keys=True, default=str) + "\n"
    if args.report:
        Path(args.report).write_text(doc, encoding="utf-8")
    print(f"achieved_ell {report.achieved_ell} seed {seed}", file=sys.stderr)
    if not rep.ok:
        for line in rep.lines():
            print(line, file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def _parse_cover(spec: str, n: int):
    if spec == "all":
        return range(n)
    if spec == "none":
        return ()
    try:
        return [int(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad cover spec {spec!r}; use 'all', 'none' or a comma list") from None


def cmd_verify(args) -> int:
    g = read_graph(args.graph)
    pk = read_packing(args.packing)
    ell = args.ell if args.ell is not None else pk.declared_ell
    rep = verify(g, pk, ell, _parse_cover(args.cover, g.vertex_count))
    for line in rep.lines():
        print(line)
    if rep.ok:
        print(f"valid: {rep.star_count} stars, min size {rep.min_star_size}")
        return EXIT_OK
    return EXIT_INVALID


def cmd_oracle(args) -> int:
    g = read_graph(args.graph)
    if args.ell is not None:
        ok, _ = exists_factor(g, args.ell, args.limit)
        print("yes" if ok else "no")
    else:
        print(max_factor_size(g, args.limit))
    return EXIT_OK


def bench_row(family: str, n: int, d: int, trial: int, seed: int, mode: str, method: str) -> dict:
    row = dict.fromkeys(CSV_COLUMNS, "")
    row.update(family=family, n=n, d=d, trial=trial, seed=seed,
               sqrt_d=round(math.sqrt(d), 6))
    if family == "lower-bound":
        row["upper_bound"] = ceil_sqrt(d) + 1
    try:
        g = generate(family, n, d, seed)
        row["vertices"] = g.vertex_count
        run = solve_regular if method == "regular" else solve
        pk, report = run(g, d, SolverConfig(mode=mode, seed=seed))
        rep = verify(g, pk, report.achieved_ell, g.vertices())
        row.update(
            achieved_ell=report.achieved_ell,
            paper_target_ell=report.paper_target_ell,
            c_tilde=report.c_tilde,
            fallback_used=int(report.fallback_used),
            verified=int(rep.ok),
            wall_time_ms=report.wall_time_ms,
        )
    except StarFactorError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _bench_job(job):
    return bench_row(*job)


def cmd_bench(args) -> int:
    try:
        ds = [int(x) for x in args.d_list.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad --d-list {args.d_list!r}") from None
    if not ds:
        raise InputError("--d-list is empty")
    seed = _seed(args)
    jobs = [
        (args.family, args.n, d, t, derive_seed(seed, args.family, d, t) % 2**32, args.mode, args.method)
        for d in ds
        for t in range(args.trials)
    ]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(_bench_job, jobs))
    else:
        rows = [_bench_job(j) for j in jobs]
    out = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.csv:
            out.close()
    failed = sum(1 for r in rows if r["error"] or r["verified"] != 1)
    print(f"{len(rows)} rows, {failed} failed", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="starfactor", description="Large star factors of graphs with minimum degree d.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", type=int, required=True, help="vertex count (lower-bound: size of layer A)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="compute a star factor")
    p.add_argument("graph")
    p.add_argument("--d", type=int, help="minimum-degree parameter (default: actual minimum degree)")
    p.add_argument("--mode", choices=("best_effort", "faithful"), default="best_effort")
    p.add_argument("--method", choices=("general", "regular"), default="general")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="packing file (default: stdout)")
    p.add_argument("--report", help="JSON report path")
    p.add_argument("--regular-c", type=float, dest="regular_c")
    for name in ("c-select", "c-cap", "c-prune", "c-slack"):
        p.add_argument(f"--{name}", type=float, dest=name.replace("-", "_"))
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a packing against a graph")
    p.add_argument("graph")
    p.add_argument("packing")
    p.add_argument("--ell", type=int, help="required star size (default: the packing header)")
    p.add_argument("--cover", default="all", help="'all', 'none' or comma-separated vertices")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact answer on tiny graphs")
    p.add_argument("graph")
    p.add_argument("--ell", type=int)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="achieved ell versus d, as CSV")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--d-list", required=True, dest="d_list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=("best_effort", "faithful"), default="best_effort")
    p.add_argument("--method", choices=("general", "regular"), default="general")
    p.add_argument("--csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverFailure as exc:
        print(f"solver failure in stage {exc.stage}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
