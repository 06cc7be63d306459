"""Command-line interface: generate graphs, estimate, compute exactly, compare.

Four subcommands:

  gen       write a graph from a named family (or an ER draw) as an edge list
  estimate  run the Monte Carlo samplers and report per-coefficient statistics
  exact     compute the chromatic polynomial with one of the exact oracles
  compare   run an estimator against an exact reference and report error metrics

Reports are JSON (default, stable key order) or CSV; every report embeds
the resolved run configuration so it can be reproduced.  Coefficients are
serialized as a sign, a base-10 log magnitude, and a decimal string when
the value fits comfortably in ordinary notation (|value| < 10^15).

Exit codes: 0 success, 2 usage error, 3 input/graph error, 4 oracle-cap
refusal.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .exact import (
    DC_CAP,
    INTERP_CAP,
    NBC_CAP,
    ExactPolynomial,
    OracleCapError,
    exact_by_interpolation,
    exact_deletion_contraction,
    exact_nbc_counts,
    formula_family,
    whitney_polynomial,
)
from .ff import falling_to_power, ff_estimate
from .graph import Graph, GraphError, gen_er, gen_named, is_connected, load_graph_text, write_edge_list
from .nbc import bc_estimate, resolve_edge_ordering, signed_coefficients
from .stats import EstimateReport, LogNumber, arc_error, rel_eval_error

DEFAULT_X_GRID = (5, 10, 15, 20, 25, 30)


def _lognumber_fields(x: LogNumber) -> dict:
    """Serialize a LogNumber as sign / log10 magnitude / optional decimal."""
    return {
        "sign": x.sign,
        "log10_magnitude": None if x.sign == 0 else x.log10,
        "decimal_string": x.decimal_string(),
    }


def _family_spec(args) -> str:
    parts = [args.family]
    if args.family == "grid3d":
        parts.append(args.dims)
    elif args.family != "kite":
        parts.append(str(args.n))
    if args.family == "er":
        parts.append(f"p={args.p}")
        parts.append(f"seed={args.seed}")
    return ":".join(parts)


def _build_graph(args, parser: argparse.ArgumentParser) -> tuple[Graph, str]:
    """Resolve the input graph from a file path or a --family spec."""
    if getattr(args, "input", None):
        path = Path(args.input)
        g, duplicates = load_graph_text(path.read_text(encoding="utf-8"), str(path))
        if duplicates:
            print(f"note: collapsed {duplicates} duplicate edge(s)", file=sys.stderr)
        return g, str(path)
    if not getattr(args, "family", None):
        parser.error("provide an input file or --family")
    if args.family == "er":
        if args.n is None or args.p is None:
            parser.error("--family er needs --n and --p")
        return gen_er(args.n, args.p, args.seed), _family_spec(args)
    if args.family == "grid3d":
        if not args.dims:
            parser.error("--family grid3d needs --dims AxBxC")
        try:
            a, b, c = (int(part) for part in args.dims.lower().split("x"))
        except ValueError:
            parser.error("--dims must look like 2x2x2")
        return gen_named("grid3d", a, b, c), _family_spec(args)
    if args.family == "kite":
        return gen_named("kite"), _family_spec(args)
    if args.n is None:
        parser.error(f"--family {args.family} needs --n")
    return gen_named(args.family, args.n), _family_spec(args)


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        print(text)


def _report_config(args, command: str, source: str, extra: dict | None = None) -> dict:
    config = {
        "command": command,
        "input": source,
        "format": getattr(args, "format", "json"),
    }
    if extra:
        config.update(extra)
    return config


def _estimate_config(args, source: str) -> dict:
    return _report_config(
        args,
        "estimate",
        source,
        {
            "alg": args.alg,
            "variant": args.variant if args.alg == "bc" else None,
            "ordering": args.ordering if args.alg == "bc" else None,
            "samples": args.samples,
            "seed": args.seed,
            "workers": args.workers,
            "window_fraction": args.window_fraction,
            "tolerance": args.tolerance,
        },
    )


def _run_estimator(args, g: Graph) -> EstimateReport:
    if args.alg == "bc":
        return bc_estimate(
            g,
            samples=args.samples,
            seed=args.seed,
            variant=args.variant,
            ordering=args.ordering,
            workers=args.workers,
            window_fraction=args.window_fraction,
            tolerance=args.tolerance,
        )
    return ff_estimate(
        g,
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
        window_fraction=args.window_fraction,
        tolerance=args.tolerance,
    )


def _coefficient_rows(report: EstimateReport) -> list[dict]:
    rows = []
    for i, label in enumerate(report.labels):
        mean = _lognumber_fields(report.means[i])
        var = _lognumber_fields(report.variances[i])
        rows.append(
            {
                "label": label,
                "sign": mean["sign"],
                "log10_magnitude": mean["log10_magnitude"],
                "decimal_string": mean["decimal_string"],
                "variance_sign": var["sign"],
                "variance_log10_magnitude": var["log10_magnitude"],
                "variance_decimal_string": var["decimal_string"],
                "variance_imprecise": report.variance_flags[i],
                "converged": report.converged[i],
            }
        )
    return rows


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _rows_to_csv(rows: list[dict], config: dict) -> str:
    lines = ["# config " + json.dumps(config)]
    if rows:
        header = list(rows[0].keys())
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_csv_cell(row[key]) for key in header))
    return "\n".join(lines) + "\n"


def _write_trace(path: str, report: EstimateReport) -> None:
    """Convergence trace: one row per snapshot with running-mean log10s."""
    lines = ["samples," + ",".join(f"{label}_log10" for label in report.labels)]
    rounds = max((len(h) for h in report.histories), default=0)
    for r in range(rounds):
        counts = []
        cells = []
        for hist in report.histories:
            if r < len(hist):
                count, mean = hist[r]
            else:
                count, mean = hist[-1]
            counts.append(count)
            cells.append("" if mean.sign == 0 else repr(mean.log10))
        lines.append(f"{max(counts)}," + ",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_gen(args, parser) -> int:
    g, source = _build_graph(args, parser)
    text = write_edge_list(g, comment=source)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(
        f"n={g.n} m={g.m} connected={'yes' if is_connected(g) else 'no'}",
        file=sys.stderr,
    )
    return 0


def cmd_estimate(args, parser) -> int:
    g, source = _build_graph(args, parser)
    report = _run_estimator(args, g)
    config = _estimate_config(args, source)
    rows = _coefficient_rows(report)
    if args.format == "csv":
        _write_output(_rows_to_csv(rows, config), args.out)
    else:
        doc = {
            "config": config,
            "graph": {"n": report.n, "m": report.m},
            "ordering": report.ordering,
            "snapshot_every": report.snapshot_every,
            "wall_ms": report.wall_ms,
            "coefficients": rows,
        }
        _write_output(json.dumps(doc, indent=2), args.out)
    if args.trace:
        _write_trace(args.trace, report)
    return 0


def _run_oracle(args, g: Graph | None, parser) -> tuple[ExactPolynomial, str]:
    caps = {"dc": args.dc_cap, "interp": args.interp_cap, "nbc": args.nbc_cap}
    if args.oracle == "formula":
        if not args.family or args.family == "kite":
            if args.family == "kite":
                parser.error("--oracle formula needs --family cycle|wheel|complete|path|tree_star and --n")
            parser.error("--oracle formula needs --family and --n")
        family = {"path": "tree", "tree_star": "tree"}.get(args.family, args.family)
        return formula_family(family, args.n), "formula"
    assert g is not None
    if args.oracle == "dc":
        return exact_deletion_contraction(g, cap=caps["dc"]), "dc"
    if args.oracle == "interp":
        return exact_by_interpolation(g, cap=caps["interp"]), "interp"
    eo, _ = resolve_edge_ordering(g, args.ordering or "input", args.seed)
    counts = exact_nbc_counts(g, eo, cap=caps["nbc"])
    return whitney_polynomial(counts), "nbc"


def cmd_exact(args, parser) -> int:
    needs_graph = args.oracle != "formula"
    g = None
    source = _family_spec(args) if args.family else ""
    if needs_graph:
        g, source = _build_graph(args, parser)
    poly, oracle = _run_oracle(args, g, parser)
    config = _report_config(
        args,
        "exact",
        source,
        {
            "oracle": oracle,
            "ordering": args.ordering if oracle == "nbc" else None,
            "caps": {"dc": args.dc_cap, "interp": args.interp_cap, "nbc": args.nbc_cap},
        },
    )
    descending = [str(c) for c in reversed(poly.coeffs)]
    if args.format == "csv":
        rows = [
            {"power": poly.degree - i, "coefficient": c}
            for i, c in enumerate(descending)
        ]
        _write_output(_rows_to_csv(rows, config), args.out)
    else:
        doc = {
            "config": config,
            "graph": {"n": g.n, "m": g.m} if g is not None else {"n": args.n, "m": None},
            "degree": poly.degree,
            "coefficients_descending": descending,
            "polynomial": str(poly),
        }
        _write_output(json.dumps(doc, indent=2), args.out)
    return 0


def cmd_compare(args, parser) -> int:
    g, source = _build_graph(args, parser)
    poly, oracle = _run_oracle(args, g, parser)
    if poly.degree != g.n:
        raise GraphError(
            f"oracle polynomial degree {poly.degree} does not match the graph order {g.n}"
        )
    report = _run_estimator(args, g)
    if args.alg == "bc":
        approx = signed_coefficients(report.means)
        conversion_flags = None
    else:
        ascending_p = list(reversed(report.means))
        converted = falling_to_power(ascending_p)
        approx = list(converted.coeffs)
        conversion_flags = list(converted.flagged)
    true_coeffs = list(poly.coeffs)
    arc, arc_skipped = arc_error(true_coeffs, approx)
    grid = {}
    for x in args.x_grid:
        grid[str(x)] = rel_eval_error(true_coeffs, approx, x)
    per_coeff = []
    for i, (t, a) in enumerate(zip(true_coeffs, approx)):
        tl = LogNumber.from_value(t)
        al = LogNumber.from_value(a)
        if tl.sign == 0:
            err = None
        else:
            d = tl - al
            err = 0.0 if d.sign == 0 else math.exp(d.logmag - tl.logmag)
        per_coeff.append({"power": i, "relative_error": err})
    config = _estimate_config(args, source)
    config["command"] = "compare"
    config["oracle"] = oracle
    config["x_grid"] = list(args.x_grid)
    doc = {
        "config": config,
        "graph": {"n": g.n, "m": g.m},
        "wall_ms": report.wall_ms,
        "arc_error": arc,
        "arc_skipped_zero_coefficients": arc_skipped,
        "rel_eval_error": grid,
        "per_coefficient": per_coeff,
        "all_converged": all(report.converged),
    }
    if conversion_flags is not None:
        doc["cancellation_flagged_powers"] = [
            i for i, bad in enumerate(conversion_flags) if bad
        ]
    if args.format == "csv":
        rows = [
            {"metric": "arc_error", "value": arc},
            {"metric": "arc_skipped", "value": arc_skipped},
        ]
        rows.extend(
            {"metric": f"rel_eval_error@{x}", "value": grid[str(x)]}
            for x in args.x_grid
        )
        _write_output(_rows_to_csv(rows, config), args.out)
    else:
        _write_output(json.dumps(doc, indent=2), args.out)
    if args.trace:
        _write_trace(args.trace, report)
    return 0


def _add_family_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--family",
        choices=["kite", "cycle", "path", "wheel", "complete", "tree_star", "grid3d", "er"],
        help="generate the input instead of reading a file",
    )
    sub.add_argument("--n", type=int, help="order parameter for the family")
    sub.add_argument("--p", type=float, help="edge probability (er family)")
    sub.add_argument("--dims", help="AxBxC dimensions (grid3d family)")


def _add_estimator_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--alg", choices=["bc", "ff"], default="bc")
    sub.add_argument("--variant", choices=["plain", "improved"], default="plain")
    sub.add_argument("--ordering", choices=["peo", "input", "random"], default="peo")
    sub.add_argument("--samples", type=int, default=10000)
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--window-fraction", type=float, default=0.1)
    sub.add_argument("--tolerance", type=float, default=0.01)
    sub.add_argument("--trace", help="write a convergence-trace CSV to this path")


def _add_output_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--format", choices=["json", "csv"], default="json")
    sub.add_argument("--out", help="write the report here instead of stdout")


def _add_oracle_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--oracle", choices=["dc", "interp", "nbc", "formula"], default="dc")
    sub.add_argument("--dc-cap", type=int, default=DC_CAP)
    sub.add_argument("--interp-cap", type=int, default=INTERP_CAP)
    sub.add_argument("--nbc-cap", type=int, default=NBC_CAP)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chromapprox",
        description="Monte Carlo and exact chromatic polynomial coefficients",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen", help="write a graph as an edge list")
    _add_family_flags(gen)
    gen.add_argument("--seed", type=int, default=0, help="seed for the er family")
    gen.add_argument("--out", help="output path (default: stdout)")
    gen.set_defaults(func=cmd_gen)

    est = subs.add_parser("estimate", help="run a sampler and report statistics")
    est.add_argument("input", nargs="?", help="edge-list or DIMACS (.col) file")
    _add_family_flags(est)
    est.add_argument("--seed", type=int, default=0)
    _add_estimator_flags(est)
    _add_output_flags(est)
    est.set_defaults(func=cmd_estimate)

    exa = subs.add_parser("exact", help="compute the polynomial exactly")
    exa.add_argument("input", nargs="?", help="edge-list or DIMACS (.col) file")
    _add_family_flags(exa)
    exa.add_argument("--seed", type=int, default=0)
    _add_oracle_flags(exa)
    exa.add_argument("--ordering", choices=["peo", "input", "random"])
    _add_output_flags(exa)
    exa.set_defaults(func=cmd_exact)

    cmp_ = subs.add_parser("compare", help="estimator vs exact reference")
    cmp_.add_argument("input", nargs="?", help="edge-list or DIMACS (.col) file")
    _add_family_flags(cmp_)
    cmp_.add_argument("--seed", type=int, default=0)
    _add_estimator_flags(cmp_)
    _add_oracle_flags(cmp_)
    cmp_.add_argument(
        "--x-grid",
        default=",".join(str(x) for x in DEFAULT_X_GRID),
        help="comma-separated evaluation points (default 5,10,15,20,25,30)",
    )
    _add_output_flags(cmp_)
    cmp_.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "x_grid", None) is not None and isinstance(args.x_grid, str):
        try:
            args.x_grid = tuple(int(part) for part in args.x_grid.split(",") if part.strip())
        except ValueError:
            parser.error("--x-grid must be comma-separated integers")
        if not args.x_grid:
            parser.error("--x-grid must name at least one point")
    try:
        return args.func(args, parser)
    except OracleCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
