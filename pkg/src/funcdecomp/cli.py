"""Command-line front end: decompose expressions or black-box evaluation
tables, allocate coalition games, run the axiom suites, and reproduce the
three worked examples.

Exit codes: 0 success, 1 tolerance/axiom failure, 2 usage or parse error,
3 incomplete or malformed table, 4 origin-value violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from typing import Sequence

from . import axioms, decomp, demo, montecarlo
from .core import (
    EXACT_SUBSET_CAP,
    DimensionMismatchError,
    NonFiniteCoordinateError,
    NonzeroOriginError,
    indices_from_mask,
    mask_from_indices,
    permutation_from_ranks,
    project,
)
from .expr import EvaluationError, ExpressionFunction, FunctionHandle, NativeFunction, ParseError, TableFunction
from .game import GameFormatError, game_from_json, shapley

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_TABLE = 3
EXIT_ORIGIN = 4

TABLE_DIGITS = 6
DATA_DIGITS = 12

log = logging.getLogger("funcdecomp")


class TableFormatError(ValueError):
    """A masked-evaluation table is incomplete or malformed."""


# ---------------------------------------------------------------------------
# Small formatting/IO helpers


def _round_sig(v: float) -> float:
    return float(f"{v:.{DATA_DIGITS}g}")


def _cell(v: float) -> str:
    return f"{v:.{TABLE_DIGITS}g}"


def _write_output(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_point(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"bad point {text!r}; expected comma-separated numbers") from None


def _parse_ranks(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"bad permutation {text!r}; expected comma-separated integers") from None


def _read_points_csv(path: str, d: int) -> list[tuple[float, ...]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        expected = [f"x{i + 1}" for i in range(d)]
        if header is None or [h.strip() for h in header] != expected:
            raise ValueError(f"points CSV must start with header {','.join(expected)}")
        points = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != d:
                raise ValueError(f"line {lineno}: expected {d} columns, got {len(row)}")
            points.append(tuple(float(c) for c in row))
    if not points:
        raise ValueError("points CSV contains no points")
    return points


def _mask_key(mask: int) -> str:
    return "+".join(str(i) for i in indices_from_mask(mask))


def _parse_mask_key(text: str, d: int) -> int:
    text = text.strip()
    if not text:
        return 0
    try:
        indices = [int(part) for part in text.split("+")]
    except ValueError:
        raise TableFormatError(f"bad mask {text!r}") from None
    if len(set(indices)) != len(indices):
        raise TableFormatError(f"repeated index in mask {text!r}")
    try:
        return mask_from_indices(indices, d)
    except DimensionMismatchError as exc:
        raise TableFormatError(f"bad mask {text!r}: {exc}") from None


def _read_mask_table(path: str, d: int) -> dict[int, float]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["mask", "value"]:
            raise TableFormatError('table CSV must start with the header "mask,value"')
        table: dict[int, float] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise TableFormatError(f"line {lineno}: expected 2 columns, got {len(row)}")
            mask = _parse_mask_key(row[0], d)
            if mask in table:
                raise TableFormatError(f"line {lineno}: mask {row[0]!r} listed twice")
            try:
                table[mask] = float(row[1])
            except ValueError:
                raise TableFormatError(f"line {lineno}: bad value {row[1]!r}") from None
    missing = (1 << d) - len(table)
    if missing:
        raise TableFormatError(
            f"incomplete table: {missing} of {1 << d} masked evaluations missing"
        )
    return table


def _dump_mask_table(path: str, fn: FunctionHandle, x: Sequence[float]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["mask", "value"])
        for mask in range(1 << fn.d):
            writer.writerow([_mask_key(mask), repr(fn(project(x, mask)))])


# ---------------------------------------------------------------------------
# Report rendering


def _render_decomposition(meta: dict, rows: list[dict], out_format: str) -> str:
    d = meta["d"]
    has_se = any("standard_error" in r for r in rows)
    if out_format == "json":
        payload = dict(meta)
        payload["rows"] = [
            {k: ([_round_sig(v) for v in val] if isinstance(val, (list, tuple)) else
                 (_round_sig(val) if isinstance(val, float) else val))
             for k, val in row.items()}
            for row in rows
        ]
        return json.dumps(payload, indent=2) + "\n"
    if out_format == "csv":
        header = [f"x{i + 1}" for i in range(d)] + [f"G{i + 1}" for i in range(d)]
        if has_se:
            header += [f"SE{i + 1}" for i in range(d)]
        header += ["total", "residual"]
        lines = [",".join(header)]
        for row in rows:
            cells = [f"{v:.{DATA_DIGITS}g}" for v in row["x"]]
            cells += [f"{v:.{DATA_DIGITS}g}" for v in row["contributions"]]
            if has_se:
                cells += [f"{v:.{DATA_DIGITS}g}" for v in row.get("standard_error", ())]
            cells += [f"{row['total']:.{DATA_DIGITS}g}", f"{row['residual']:.{DATA_DIGITS}g}"]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    width = 12
    lines = ["  ".join(f"{k}: {v}" for k, v in meta.items())]
    header = [f"x{i + 1}" for i in range(d)] + [f"G{i + 1}" for i in range(d)]
    if has_se:
        header += [f"SE{i + 1}" for i in range(d)]
    header += ["total", "residual"]
    lines.append(" ".join(f"{h:>{width}}" for h in header))
    for row in rows:
        cells = [_cell(v) for v in row["x"]] + [_cell(v) for v in row["contributions"]]
        if has_se:
            cells += [_cell(v) for v in row.get("standard_error", ())]
        cells += [_cell(row["total"]), _cell(row["residual"])]
        lines.append(" ".join(f"{c:>{width}}" for c in cells))
        if "reference" in row:
            ref = [""] * d + [_cell(v) for v in row["reference"]]
            lines.append(" ".join(f"{c:>{width}}" for c in ref) + "  (closed form)")
    return "\n".join(lines) + "\n"


def _render_allocation(meta: dict, shares: Sequence[float], grand: float,
                       out_format: str) -> str:
    residual = abs(math.fsum(shares) - grand)
    if out_format == "json":
        payload = dict(meta)
        payload.update({
            "shares": [_round_sig(v) for v in shares],
            "grand_value": _round_sig(grand),
            "residual": _round_sig(residual),
        })
        return json.dumps(payload, indent=2) + "\n"
    if out_format == "csv":
        header = [f"phi{i + 1}" for i in range(len(shares))] + ["grand_value", "residual"]
        cells = [f"{v:.{DATA_DIGITS}g}" for v in shares]
        cells += [f"{grand:.{DATA_DIGITS}g}", f"{residual:.{DATA_DIGITS}g}"]
        return ",".join(header) + "\n" + ",".join(cells) + "\n"
    width = 12
    lines = ["  ".join(f"{k}: {v}" for k, v in meta.items())]
    header = [f"phi{i + 1}" for i in range(len(shares))] + ["grand_value", "residual"]
    lines.append(" ".join(f"{h:>{width}}" for h in header))
    cells = [_cell(v) for v in shares] + [_cell(grand), _cell(residual)]
    lines.append(" ".join(f"{c:>{width}}" for c in cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Subcommand handlers


def _resolve_method(method: str, d: int) -> str:
    if method != "auto":
        return method
    return "delta-star" if d <= EXACT_SUBSET_CAP else "mc"


def _decompose_rows(fn: FunctionHandle, points: list[tuple[float, ...]], method: str,
                    args: argparse.Namespace) -> tuple[dict, list[dict]]:
    d = fn.d
    meta: dict = {"method": method, "d": d, "function": getattr(fn, "label", "?")}
    rows = []
    for x in points:
        if method == "sequential":
            perm = permutation_from_ranks(_parse_ranks(args.perm)) if args.perm else None
            res = decomp.sequential(fn, x, perm)
        elif method == "as":
            res = decomp.as_subset(fn, x)
        elif method == "pointwise":
            res = decomp.pointwise_shapley(fn, x)
        elif method == "delta-star":
            res = decomp.delta_star(fn, x)
        elif method == "mc":
            report = montecarlo.estimate_as(fn, x, args.samples, args.seed,
                                            workers=args.workers)
            total = fn(x)
            rows.append({
                "x": list(x),
                "contributions": list(report.estimate),
                "standard_error": list(report.standard_error),
                "total": total,
                "residual": abs(total - report.total),
            })
            meta.update({"method": f"monte_carlo(seed={report.seed}, n={report.n_samples})"})
            continue
        elif method == "mc-delta-star":
            base = fn((0.0,) * d)
            centered = NativeFunction(lambda y: fn(y) - base, d, label=fn.label)
            report = montecarlo.estimate_as(centered, x, args.samples, args.seed,
                                            workers=args.workers)
            contributions = [v + base / d for v in report.estimate]
            total = fn(x)
            rows.append({
                "x": list(x),
                "contributions": contributions,
                "standard_error": list(report.standard_error),
                "total": total,
                "residual": abs(total - math.fsum(contributions)),
            })
            meta.update({"method": f"monte_carlo_delta_star(seed={report.seed}, "
                                   f"n={report.n_samples})"})
            continue
        else:
            raise ValueError(f"unknown method {method!r}")
        meta["method"] = res.method
        rows.append({
            "x": list(res.x),
            "contributions": list(res.contributions),
            "total": res.total,
            "residual": res.residual,
        })
    return meta, rows


def cmd_decompose(args: argparse.Namespace) -> int:
    d = args.dimension
    if d is None:
        raise ValueError("decompose needs -d/--dimension")
    if bool(args.function) == bool(args.table_csv):
        raise ValueError("provide exactly one of -f/--function or --table-csv")

    if args.point:
        points = [_parse_point(args.point)]
    elif args.points_csv:
        if args.table_csv:
            raise ValueError("--points-csv cannot be combined with --table-csv "
                             "(a table anchors a single point)")
        points = _read_points_csv(args.points_csv, d)
    else:
        raise ValueError("provide -x/--point or --points-csv")

    if args.function:
        fn: FunctionHandle = ExpressionFunction(args.function, d)
    else:
        table = _read_mask_table(args.table_csv, d)
        anchor = points[0]
        try:
            fn = TableFunction(
                d, [(project(anchor, mask), v) for mask, v in table.items()],
                label=f"table:{os.path.basename(args.table_csv)}",
            )
        except EvaluationError as exc:
            raise TableFormatError(str(exc)) from None

    method = _resolve_method(args.method, d)
    if method == "mc" and args.method == "auto":
        # auto above the exact cap keeps delta-star semantics via sampling
        method = "mc-delta-star"

    if args.dump_table:
        if not args.function:
            raise ValueError("--dump-table needs an expression function")
        _dump_mask_table(args.dump_table, fn, points[0])

    meta, rows = _decompose_rows(fn, points, method, args)
    _write_output(_render_decomposition(meta, rows, args.format), args.output)
    worst = max(row["residual"] for row in rows)
    return EXIT_OK if worst <= args.tol else EXIT_FAIL


def cmd_shapley(args: argparse.Namespace) -> int:
    with open(args.game) as fh:
        data = json.load(fh)
    game = game_from_json(data)
    allocation = shapley(game)
    meta = {"method": "shapley", "d": game.d, "game": os.path.basename(args.game)}
    _write_output(
        _render_allocation(meta, allocation.shares, game.grand_value, args.format),
        args.output,
    )
    return EXIT_OK if allocation.efficiency_gap(game) <= args.tol else EXIT_FAIL


def _corpus_from_spec_file(path: str) -> tuple[axioms.SuiteConfig, list]:
    with open(path) as fh:
        data = json.load(fh)
    config = axioms.SuiteConfig(
        d=data.get("d", 4),
        n_functions=data.get("n_functions", 20),
        n_points=data.get("n_points", 50),
        n_permutations=data.get("n_permutations", 5),
        seed=data.get("seed", 2023),
        tolerance=data.get("tolerance", 1e-9),
    )
    corpus = []
    if "families" in data:
        for entry in data["families"]:
            spec = axioms.CorpusSpec(
                family=entry["family"],
                d=entry.get("d", config.d),
                count=entry.get("count", 1),
                seed=entry.get("seed", config.seed),
                params=entry.get("params", {}),
            )
            corpus.extend(axioms.generate_corpus(spec))
    else:
        corpus = axioms.default_corpus(config)
    return config, corpus


def cmd_axioms(args: argparse.Namespace) -> int:
    principle = axioms.PRINCIPLES[args.principle]
    if args.corpus_spec:
        config, corpus = _corpus_from_spec_file(args.corpus_spec)
    else:
        config = axioms.SuiteConfig(
            d=args.dimension or 4,
            n_functions=args.functions,
            n_points=args.points,
            n_permutations=args.perms,
            seed=args.seed,
            tolerance=args.tol,
        )
        corpus = axioms.default_corpus(config)
    if not corpus:
        sys.stderr.write("no functions in the corpus\n")
        return EXIT_USAGE
    records = axioms.run_axiom_suite(principle, config, corpus)
    lines = []
    failed = 0
    for record in records:
        obj = {"principle": principle.name}
        obj.update(record.to_json_dict())
        lines.append(json.dumps(obj))
        if record.verdict.status == axioms.FAIL:
            failed += 1
    _write_output("\n".join(lines) + "\n", args.output)
    log.info("%d verdicts, %d failed", len(records), failed)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_example1(args: argparse.Namespace) -> int:
    fn = axioms.example1_function(args.s0, args.c0)
    x = _parse_point(args.point)
    res = decomp.delta_star(fn, x)
    reference = axioms.example1_closed_form(args.s0, args.c0, x)
    meta = {"method": res.method, "d": 2, "function": fn.label}
    rows = [{
        "x": list(res.x),
        "contributions": list(res.contributions),
        "total": res.total,
        "residual": res.residual,
        "reference": list(reference),
    }]
    _write_output(_render_decomposition(meta, rows, args.format), args.output)
    dev = max(abs(a - b) for a, b in zip(res.contributions, reference))
    return EXIT_OK if dev <= args.tol and res.residual <= args.tol else EXIT_FAIL


def cmd_example2(args: argparse.Namespace) -> int:
    readings = _parse_point(args.readings)
    d = len(readings)
    fn = axioms.example2_function(d, args.base, args.rate,
                                  args.discount_rate, args.threshold)
    res = decomp.delta_star(fn, x=readings)
    meta = {"method": res.method, "d": d, "function": fn.label,
            "fixed_cost_per_head": _round_sig(fn((0.0,) * d) / d)}
    rows = [{
        "x": list(res.x),
        "contributions": list(res.contributions),
        "total": res.total,
        "residual": res.residual,
    }]
    _write_output(_render_decomposition(meta, rows, args.format), args.output)
    return EXIT_OK if res.residual <= args.tol else EXIT_FAIL


def cmd_example3(args: argparse.Namespace) -> int:
    model = demo.build_claims_model(args.portfolio, args.factors, args.scenarios,
                                    args.seed, loading=args.loading)
    fn = model.movement_function()
    x = _parse_point(args.point) if args.point else (0.1,) * args.factors
    res = decomp.delta_star(fn, x)
    meta = {
        "method": res.method,
        "d": args.factors,
        "function": "tail-quantile movement (99.5%)",
        "portfolio": args.portfolio,
        "scenarios": args.scenarios,
        "seed": args.seed,
        "baseline_var": _round_sig(model.baseline),
    }
    rows = [{
        "x": list(res.x),
        "contributions": list(res.contributions),
        "total": res.total,
        "residual": res.residual,
    }]
    _write_output(_render_decomposition(meta, rows, args.format), args.output)
    return EXIT_OK if res.residual <= args.tol else EXIT_FAIL


# ---------------------------------------------------------------------------
# Argument parsing


def _add_common_output(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=["table", "json", "csv"], default="table")
    sub.add_argument("-o", "--output", help="write the report to this file")
    sub.add_argument("--tol", type=float, default=1e-9,
                     help="residual tolerance for the exit code")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="funcdecomp",
        description="Additive decomposition of functions of several real arguments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="attribute a function value to its arguments")
    p.add_argument("-d", "--dimension", type=int, required=True)
    p.add_argument("-f", "--function", help="expression over x1..xd")
    p.add_argument("--table-csv", help="masked evaluations (header mask,value; "
                                       "mask like 1+3, empty for no arguments)")
    p.add_argument("-x", "--point", help="comma-separated coordinates")
    p.add_argument("--points-csv", help="CSV of points (header x1..xd)")
    p.add_argument("--method", default="auto",
                   choices=["auto", "sequential", "as", "delta-star", "pointwise", "mc"])
    p.add_argument("--perm", help="activation ranks for --method sequential, e.g. 2,1,3")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dump-table", help="also write the masked evaluations to this CSV")
    _add_common_output(p)
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("shapley", help="allocate a coalition game")
    p.add_argument("game", help="game JSON path")
    _add_common_output(p)
    p.set_defaults(handler=cmd_shapley)

    p = sub.add_parser("axioms", help="run the axiom suite for a principle")
    p.add_argument("corpus_spec", nargs="?", help="corpus spec JSON path")
    p.add_argument("--principle", default="delta-star", choices=sorted(axioms.PRINCIPLES))
    p.add_argument("-d", "--dimension", type=int)
    p.add_argument("--functions", type=int, default=20)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--perms", type=int, default=5)
    p.add_argument("--seed", type=int, default=2023)
    p.add_argument("-o", "--output")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=cmd_axioms)

    p = sub.add_parser("example1", help="stock in foreign currency: two-factor gain split")
    p.add_argument("--s0", type=float, default=2.0)
    p.add_argument("--c0", type=float, default=3.0)
    p.add_argument("-x", "--point", default="1,1")
    _add_common_output(p)
    p.set_defaults(handler=cmd_example1)

    p = sub.add_parser("example2", help="shared utility bill split by meter readings")
    p.add_argument("--base", type=float, default=10.0)
    p.add_argument("--rate", type=float, default=2.0)
    p.add_argument("--discount-rate", type=float, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--readings", default="1,2,3")
    _add_common_output(p)
    p.set_defaults(handler=cmd_example2)

    p = sub.add_parser("example3", help="tail-quantile movement attribution (toy portfolio)")
    p.add_argument("-d", "--factors", type=int, default=3)
    p.add_argument("--portfolio", type=int, default=50)
    p.add_argument("--scenarios", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--loading", type=float, default=None,
                   help="fix all factor loadings to this value (symmetric model)")
    p.add_argument("-x", "--point", help="risk-factor moves; default 0.1 each")
    _add_common_output(p)
    p.set_defaults(handler=cmd_example3)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("DECOMP_LOG", "WARNING").upper())
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (TableFormatError, GameFormatError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_TABLE
    except NonzeroOriginError as exc:
        sys.stderr.write(f"error: {exc}\nhint: use --method delta-star\n")
        return EXIT_ORIGIN
    except (DimensionMismatchError, NonFiniteCoordinateError, EvaluationError,
            ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
