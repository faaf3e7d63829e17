"""Command-line surface: generate, validate, enumerate, solve, adversary, bench.

Exit codes: 0 success, 1 validation violation, 2 usage error, 3 cap exceeded,
4 bound violated, 5 sink mismatch, 6 adversary inconsistency.  Identical
command lines produce byte-identical CSV output and JSON output identical up
to the wall_time field.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import gen, serialize, solvers
from .dgrid import brute_force_sink_ddim, validate_uso_ddim
from .errors import CapExceededError, GridError
from .grid import brute_force_sink, validate_uso
from .oracles import (
    adversary_vertex_oracle,
    ddim_vertex_oracle,
    edge_oracle,
    replay_transcript,
    vertex_oracle,
)
from .report import ALG_QUERY_KIND, CSV_HEADER, RunReport

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_BOUND = 4
EXIT_SINK = 5
EXIT_ADVERSARY = 6

_VERDICT_EXIT = {"ok": EXIT_OK, "unverified": EXIT_OK, "bound-exceeded": EXIT_BOUND,
                 "sink-mismatch": EXIT_SINK}


def _parse_shape(text: str, parser: argparse.ArgumentParser, want_dims: int | None = 2):
    try:
        dims = tuple(int(part) for part in text.lower().split("x"))
    except ValueError:
        parser.error(f"bad shape {text!r}: expected like 8x8")
    if any(d < 1 for d in dims):
        parser.error(f"bad shape {text!r}: sizes must be positive")
    if want_dims is not None and len(dims) != want_dims:
        parser.error(f"shape {text!r} must have exactly {want_dims} dimensions")
    return dims


def _emit(doc: dict, out_path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args, parser) -> int:
    if args.model == "oneline":
        m, n = _parse_shape(args.shape, parser)
        doc = serialize.values_to_json(gen.gen_one_line(m, n, args.seed))
    elif args.model == "separable":
        dims = _parse_shape(args.shape, parser, want_dims=None)
        doc = serialize.dgrid_to_json(gen.gen_separable_ddim(dims, args.seed))
    else:  # enumerate-index: the seed doubles as the index
        m, n = _parse_shape(args.shape, parser)
        try:
            grids = list(gen.enumerate_usos((m, n)))
        except CapExceededError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CAP
        if not 0 <= args.seed < len(grids):
            parser.error(
                f"index {args.seed} out of range: {m}x{n} has {len(grids)} USOs"
            )
        doc = serialize.grid_to_json(grids[args.seed])
    _emit(doc, args.out)
    return EXIT_OK


def _cmd_validate(args, parser) -> int:
    try:
        doc = serialize.load_grid_file(args.grid)
    except (GridError, OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot load {args.grid}: {exc}")
    try:
        if doc.is_ddim:
            violation = validate_uso_ddim(doc.grid, max_subgrids=args.max_subgrids)
        else:
            violation = validate_uso(doc.grid, max_coords=args.max_coords)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    if violation is None:
        print("ok")
        return EXIT_OK
    if doc.is_ddim:
        detail = {
            "subsets": [sorted(c + 1 for c in s) for s in violation.subsets],
            "sinks": violation.sink_count,
        }
    else:
        detail = {
            "rows": sorted(r + 1 for r in violation.rows),
            "cols": sorted(c + 1 for c in violation.cols),
            "sinks": violation.sink_count,
        }
    print(json.dumps({"violation": detail}, sort_keys=True))
    return EXIT_VIOLATION


def _cmd_enumerate(args, parser) -> int:
    m, n = _parse_shape(args.shape, parser)
    try:
        if args.count_only:
            print(gen.count_usos((m, n)))
            return EXIT_OK
        lines = []
        for grid in gen.enumerate_usos((m, n)):
            lines.append(json.dumps(serialize.grid_to_json(grid), sort_keys=True,
                                    separators=(",", ":")))
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _load_instance(args, parser) -> serialize.GridDoc:
    if args.grid:
        try:
            return serialize.load_grid_file(args.grid)
        except (GridError, OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot load {args.grid}: {exc}")
    if not args.model or not args.shape:
        parser.error("need either --grid or --model with --shape")
    if args.model == "oneline":
        m, n = _parse_shape(args.shape, parser)
        vm = gen.gen_one_line(m, n, args.seed)
        return serialize.GridDoc(gen.orient_from_values(vm), vm)
    if args.model == "separable":
        dims = _parse_shape(args.shape, parser, want_dims=None)
        return serialize.GridDoc(gen.gen_separable_ddim(dims, args.seed), None)
    parser.error(f"model {args.model!r} not usable here")


def _solve_once(alg: str, doc: serialize.GridDoc, seed: int | None, parser) -> RunReport:
    start = time.perf_counter()
    if alg == "ddim":
        if not doc.is_ddim:
            parser.error("--alg ddim needs a d-dimensional grid (dims format)")
        dims = doc.grid.dims
        sink, counter = solvers.ddim_solve(ddim_vertex_oracle(doc.grid), dims)
        return RunReport.build(
            alg, dims, seed, counter, solvers.ddim_bound(dims), sink,
            expected_sink=brute_force_sink_ddim(doc.grid),
            wall_time=time.perf_counter() - start,
        )
    if doc.is_ddim:
        parser.error(f"--alg {alg} needs a 2-dimensional grid")
    shape = doc.grid.shape
    m, n = shape.rows, shape.cols
    source = doc.values if doc.values is not None else doc.grid
    if alg == "dc-edge":
        oracle = edge_oracle(source, record=False)
        sink, counter = solvers.dc_edge_solve(oracle, m, n)
        bound = solvers.dc_edge_bound(m, n)
    else:
        oracle = vertex_oracle(source, record=False)
        if alg == "diagonal":
            if m != n:
                parser.error("--alg diagonal needs a square grid")
            sink, counter = solvers.diagonal_solve(oracle, n)
            bound = solvers.diagonal_bound(n)
        elif alg == "rect":
            sink, counter = solvers.rectangular_solve(oracle, m, n)
            bound = solvers.rectangular_bound(m, n)
        elif alg == "walk":
            sink, counter = solvers.walk_solve(oracle)
            bound = solvers.exhaustive_bound(m, n)
        else:  # random-edge
            sink, counter = solvers.random_edge_solve(oracle, seed or 0)
            bound = solvers.exhaustive_bound(m, n)
    expected = (
        doc.values.argmin_vertex() if doc.values is not None
        else brute_force_sink(doc.grid)
    )
    return RunReport.build(
        alg, (m, n), seed, counter, bound, sink, expected_sink=expected,
        wall_time=time.perf_counter() - start,
    )


def _cmd_solve(args, parser) -> int:
    doc = _load_instance(args, parser)
    report = _solve_once(args.alg, doc, args.seed, parser)
    _emit(report.to_json_dict(), args.report)
    return _VERDICT_EXIT[report.verdict]


def _cmd_adversary(args, parser) -> int:
    m, n = _parse_shape(args.shape, parser)
    if args.alg == "diagonal" and m != n:
        parser.error("--alg diagonal needs a square shape")
    oracle = adversary_vertex_oracle((m, n))
    if args.alg == "diagonal":
        solvers.diagonal_solve(oracle, n)
    elif args.alg == "rect":
        solvers.rectangular_solve(oracle, m, n)
    else:
        solvers.walk_solve(oracle)
    grid = oracle.materialize()
    if m + n <= 14:
        valid = validate_uso(grid) is None
    else:
        valid = "skipped-cap"
    replay_ok = replay_transcript(oracle.transcript, vertex_oracle(grid))
    consistent = replay_ok and valid is not False
    doc = {
        "algorithm": args.alg,
        "shape": [m, n],
        "queries_vertex": oracle.counter.vertex_queries,
        "expected": m + n - 1,
        "materialized_valid": valid,
        "replay_ok": replay_ok,
        "verdict": "consistent" if consistent else "inconsistent",
    }
    _emit(doc, args.out)
    return EXIT_OK if consistent else EXIT_ADVERSARY


def _cmd_bench(args, parser) -> int:
    sizes = []
    for part in args.sizes.split(","):
        try:
            size = int(part)
        except ValueError:
            parser.error(f"bad size {part!r}")
        if size < 1:
            parser.error(f"bad size {part!r}")
        sizes.append(size)
    if args.trials < 1:
        parser.error("--trials must be positive")
    reports = []
    for size in sizes:
        for seed in range(args.trials):
            vm = gen.gen_one_line(size, size, seed)
            reports.append(_bench_one(args.alg, vm, size, seed))
    reports.sort(key=lambda r: (r.algorithm, r.shape, r.seed))
    text = CSV_HEADER + "\n" + "".join(r.csv_row() + "\n" for r in reports)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if any(r.verdict == "sink-mismatch" for r in reports):
        return EXIT_SINK
    if any(not r.bound_ok for r in reports):
        return EXIT_BOUND
    return EXIT_OK


def _bench_one(alg: str, vm, size: int, seed: int) -> RunReport:
    start = time.perf_counter()
    if alg == "dc-edge":
        oracle = edge_oracle(vm, record=False)
        sink, counter = solvers.dc_edge_solve(oracle, size, size)
        bound = solvers.dc_edge_bound(size, size)
    else:
        oracle = vertex_oracle(vm, record=False)
        if alg == "diagonal":
            sink, counter = solvers.diagonal_solve(oracle, size)
            bound = solvers.diagonal_bound(size)
        elif alg == "rect":
            sink, counter = solvers.rectangular_solve(oracle, size, size)
            bound = solvers.rectangular_bound(size, size)
        elif alg == "walk":
            sink, counter = solvers.walk_solve(oracle)
            bound = solvers.exhaustive_bound(size, size)
        else:
            sink, counter = solvers.random_edge_solve(oracle, seed)
            bound = solvers.exhaustive_bound(size, size)
    return RunReport.build(
        alg, (size, size), seed, counter, bound, sink,
        expected_sink=vm.argmin_vertex(), wall_time=time.perf_counter() - start,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="usogrid",
        description="Grid unique-sink-orientation toolbox: generate, validate, solve, bench.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a grid instance as JSON")
    p.add_argument("--model", choices=["oneline", "separable", "enumerate-index"],
                   required=True)
    p.add_argument("--shape", required=True, help="e.g. 8x8, or 2x3x4 for separable")
    p.add_argument("--seed", type=int, default=0,
                   help="RNG seed; for enumerate-index, the index")
    p.add_argument("-o", "--out", help="output path (default stdout)")

    p = sub.add_parser("validate", help="check the unique-sink property of a grid file")
    p.add_argument("grid", help="grid JSON path")
    p.add_argument("--max-coords", type=int, default=14,
                   help="validator cap on m + n (default 14)")
    p.add_argument("--max-subgrids", type=int, default=100_000,
                   help="d-dimensional validator cap on subgrid count")

    p = sub.add_parser("enumerate", help="stream every USO of a small shape")
    p.add_argument("--shape", required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("-o", "--out", help="output path (default stdout)")

    p = sub.add_parser("solve", help="run a solver and write its run report")
    p.add_argument("--alg", choices=sorted(ALG_QUERY_KIND), required=True)
    p.add_argument("--grid", help="grid JSON path")
    p.add_argument("--model", choices=["oneline", "separable"],
                   help="generate the instance instead of loading one")
    p.add_argument("--shape")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="report JSON path (default stdout)")

    p = sub.add_parser("adversary", help="run a solver against the adaptive adversary")
    p.add_argument("--shape", required=True)
    p.add_argument("--alg", choices=["diagonal", "rect", "walk"], required=True)
    p.add_argument("-o", "--out", help="output path (default stdout)")

    p = sub.add_parser("bench", help="CSV of query counts over sizes and seeds")
    p.add_argument("--alg", choices=sorted(a for a in ALG_QUERY_KIND if a != "ddim"),
                   required=True)
    p.add_argument("--sizes", required=True, help="comma-separated square sizes")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--csv", help="output path (default stdout)")

    return parser


_HANDLERS = {
    "gen": _cmd_gen,
    "validate": _cmd_validate,
    "enumerate": _cmd_enumerate,
    "solve": _cmd_solve,
    "adversary": _cmd_adversary,
    "bench": _cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return _HANDLERS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
