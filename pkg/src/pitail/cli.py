"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 computational error (precision or resource limits).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import analysis, catalog, expansion, hpeval
from .errors import PrecisionError, ResourceError, SeriesNotFound, SingularRecursion

DEFAULT_PREC = 256

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rat(x) -> str:
    return catalog.format_rational(x)


def _rational_arg(text: str) -> Fraction:
    try:
        return catalog.parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _int_list(tokens: list[str]) -> list[int]:
    out = []
    for tok in tokens:
        out.extend(int(part) for part in tok.split(",") if part.strip())
    return out


def _series(sid: int) -> catalog.SeriesParams:
    try:
        return catalog.get_series(sid)
    except SeriesNotFound as exc:
        raise UsageError(str(exc)) from None


def _envelope(command: str, params: dict, result, warnings: list[str]) -> dict:
    return {"command": command, "params": params, "result": result, "warnings": warnings}


# ---------------------------------------------------------------------------
# subcommands; each returns (params_echo, json_result, text_lines, warnings, exit_code)


def cmd_catalog(args):
    rows = catalog.load_catalog()
    if args.action == "export":
        # the export format is the bare array, so it round-trips through catalog_from_json
        return None, json.loads(catalog.catalog_to_json(rows)), None, [], EXIT_OK
    lines = [f"{'id':>3}  {'q':>4}  {'r':>9}  {'s':>10}  {'t':>22}  p"]
    for row in rows:
        lines.append(f"{row.id:>3}  {_rat(row.q):>4}  {row.r:>9}  {row.s:>10}  {_rat(row.t):>22}  {row.p}")
    result = [
        {"id": row.id, "q": _rat(row.q), "r": row.r, "s": row.s, "t": _rat(row.t), "p": str(row.p)}
        for row in rows
    ]
    return {"action": "list"}, result, lines, [], EXIT_OK


def _warn_conjectural(params: catalog.SeriesParams) -> list[str]:
    if params.conjectural:
        return [f"series {params.id} is conjectural: the expansion is unproved for |t| = 1"]
    return []


def cmd_coeffs(args):
    params = _series(args.series)
    if args.J < 1:
        raise UsageError("--J must be >= 1")
    table = expansion.c_table(params, args.J)
    c = [_rat(x) for x in table.c]
    return {"series": args.series, "J": args.J}, {"series": args.series, "J": args.J, "c": c}, c, _warn_conjectural(params), EXIT_OK


def cmd_alpha_coeffs(args):
    if not 0 < args.q < 1:
        raise UsageError("--q must lie in (0, 1)")
    if args.J < 2:
        raise UsageError("--J must be >= 2")
    f = expansion.alpha_series(args.q, args.J)
    vals = [_rat(x) for x in f.coeffs[1:]]
    return {"q": _rat(args.q), "J": args.J}, {"q": _rat(args.q), "J": args.J, "f": vals}, vals, [], EXIT_OK


def cmd_remainder(args):
    params = _series(args.series)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    report = hpeval.remainder_report(params, args.n, args.J, args.prec)
    data = report.to_json()
    lines = [f"{k}: {v['value'] if isinstance(v, dict) else v}" for k, v in data.items()]
    echo = {"series": args.series, "n": args.n, "J": args.J, "prec": args.prec}
    return echo, data, lines, _warn_conjectural(params), EXIT_OK


def cmd_alpha(args):
    if not 0 < args.q < 1:
        raise UsageError("--q must lie in (0, 1)")
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    value = hpeval.alpha_direct(args.q, args.n, args.prec)
    echo = {"q": _rat(args.q), "n": args.n, "prec": args.prec}
    return echo, {"alpha": value.to_json()}, [value.to_decimal()], [], EXIT_OK


def cmd_envelope(args):
    if args.series not in (None, analysis.ENVELOPE_SERIES):
        _series(args.series)
    sid = args.series or analysis.ENVELOPE_SERIES
    warnings = []
    if sid != analysis.ENVELOPE_SERIES:
        warnings.append(f"exploratory, no paper claim: enveloping is only conjectured for series {analysis.ENVELOPE_SERIES}")
    warnings += _warn_conjectural(catalog.get_series(sid))
    reports = analysis.envelope_check(args.n_max, args.L_max, args.prec, series_id=sid, jobs=args.jobs)
    counts = {s: sum(r.status == s for r in reports) for s in ("holds", "violated", "indeterminate")}
    verdict = counts["holds"] == len(reports)
    lines = [f"{'L':>4} {'n':>5}  {'status':<13} margin"]
    lines += [f"{r.L:>4} {r.n:>5}  {r.status:<13} {r.margin.to_decimal(6)}" for r in reports]
    lines.append(
        f"verdict: {'PASS' if verdict else 'FAIL'} "
        f"({counts['holds']} holds, {counts['violated']} violated, {counts['indeterminate']} indeterminate)"
    )
    echo = {"series": sid, "L_max": args.L_max, "n_max": args.n_max, "prec": args.prec}
    result = {"cells": [r.to_json() for r in reports], "counts": counts, "pass": verdict}
    return echo, result, lines, warnings, EXIT_OK if verdict else EXIT_FAILED


def cmd_accelerate(args):
    params = _series(args.series)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    J = args.J
    if J != "auto":
        try:
            J = int(J)
        except ValueError:
            raise UsageError("--J must be an integer or 'auto'") from None
    report = analysis.accelerate(params, args.n, J, args.prec)
    data = report.to_json()
    lines = [f"{k}: {v['value'] if isinstance(v, dict) else v}" for k, v in data.items()]
    echo = {"series": args.series, "n": args.n, "J": args.J, "prec": args.prec}
    return echo, data, lines, list(report.warnings), EXIT_OK


def cmd_order_sweep(args):
    params = _series(args.series)
    n_list = _int_list(args.n)
    if not n_list or min(n_list) < 1:
        raise UsageError("--n needs positive integers")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise UsageError("--n must be strictly ascending")
    reports = analysis.order_sweep(params, n_list, args.J, args.prec, jobs=args.jobs)
    scaled = [float(r.scaled_error) for r in reports]
    spread = max(scaled) / min(scaled) if min(scaled) > 0 else float("inf")
    lines = [f"{'n':>6}  {'ratio':<28} {'abs_error':<16} scaled_error"]
    lines += [
        f"{r.n:>6}  {r.ratio.to_decimal(22):<28} {r.abs_error.to_decimal(10):<16} {r.scaled_error.to_decimal(10)}"
        for r in reports
    ]
    lines.append(f"scaled_error max/min: {spread:.6g}")
    echo = {"series": args.series, "n": n_list, "J": args.J, "prec": args.prec}
    result = {"reports": [r.to_json() for r in reports], "scaled_error_spread": round(spread, 9)}
    return echo, result, lines, _warn_conjectural(params), EXIT_OK


def cmd_signs(args):
    params = _series(args.series)
    if args.J < 1:
        raise UsageError("--J must be >= 1")
    signs = analysis.sign_pattern(expansion.c_table(params, args.J))
    return {"series": args.series, "J": args.J}, {"signs": signs}, [" ".join(signs)], _warn_conjectural(params), EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--prec", type=int, default=DEFAULT_PREC, help="precision in bits (default 256)")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes for grid sweeps")

    parser = argparse.ArgumentParser(
        prog="pitail", description="Asymptotic expansion of remainders of hypergeometric series for 1/pi."
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("catalog", parents=[common], help="list or export the series catalog")
    p.add_argument("action", choices=("list", "export"), nargs="?", default="list")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("coeffs", parents=[common], help="exact c_0..c_{J-1}")
    p.add_argument("--series", type=int, required=True)
    p.add_argument("--J", type=int, required=True)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("alpha-coeffs", parents=[common], help="exact f_1..f_{J-1}")
    p.add_argument("--q", type=_rational_arg, required=True)
    p.add_argument("--J", type=int, required=True)
    p.set_defaults(func=cmd_alpha_coeffs)

    p = sub.add_parser("remainder", parents=[common], help="R_n against the J-term expansion")
    p.add_argument("--series", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--J", type=int, default=4)
    p.set_defaults(func=cmd_remainder)

    p = sub.add_parser("alpha", parents=[common], help="alpha_n at high precision")
    p.add_argument("--q", type=_rational_arg, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("envelope", parents=[common], help="check the enveloping bracket for series 33")
    p.add_argument("--L-max", dest="L_max", type=int, required=True)
    p.add_argument("--n-max", dest="n_max", type=int, required=True)
    p.add_argument("--series", type=int, default=None, help="exploratory: another catalog row")
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("accelerate", parents=[common], help="tail-corrected partial sum")
    p.add_argument("--series", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--J", default="auto")
    p.set_defaults(func=cmd_accelerate)

    p = sub.add_parser("order-sweep", parents=[common], help="scaled error over a list of n")
    p.add_argument("--series", type=int, required=True)
    p.add_argument("--n", nargs="+", required=True, help="ascending n values (space or comma separated)")
    p.add_argument("--J", type=int, required=True)
    p.set_defaults(func=cmd_order_sweep)

    p = sub.add_parser("signs", parents=[common], help="sign pattern of the nonzero c_j")
    p.add_argument("--series", type=int, required=True)
    p.add_argument("--J", type=int, required=True)
    p.set_defaults(func=cmd_signs)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.prec < 64:
        print(f"{parser.prog}: error: --prec must be >= 64", file=sys.stderr)
        return EXIT_USAGE
    try:
        echo, result, lines, warnings, code = args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionError, ResourceError, SingularRecursion) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE

    if args.format == "json":
        payload = result if echo is None else _envelope(args.command, echo, result, warnings)
        print(json.dumps(payload, indent=2))
    else:
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        if lines is None:
            lines = [json.dumps(result, indent=2)]
        print("\n".join(lines))
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
