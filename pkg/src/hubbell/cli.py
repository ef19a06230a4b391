"""Command-line front end.

    hubbell eval --a 0.1 --b 0.1 --p 0.5
    hubbell tables --which all --format json
    hubbell f2 --sigma 1 --a1 .5 --a2 .5 --b1 1.5 --b2 1.5 --x -.04 --y -.09

Exit codes: 0 ok, 1 validation error, 2 not converged, 3 a table row fell
short of its agreement level. Results go to stdout, diagnostics to stderr.
``HUBBELL_TOLERANCE`` overrides the default ``--tolerance``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass

from .appell import F2Args, f2_double_series, f2_recurrence_step, f2_reduce_to_2f1
from .exceptions import HubbellError, NotConvergedWarning
from .integrals import HALF_CASE, HubbellParams, eval_h_closed_half, eval_h_general
from .oracle import QuadratureControl, quad_h_general
from .special import SeriesControl
from .tables import TABLE_IDS, emit_report, row_meets_criteria, run_table

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_CONVERGED = 2
EXIT_TABLE_MISMATCH = 3

TOLERANCE_ENV = "HUBBELL_TOLERANCE"
FORMATS = ("text", "json", "csv")
METHODS = ("auto", "sum", "closed", "quadrature")
F2_METHODS = ("series", "reduce", "recurrence-check")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; 2 means "not converged" here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class CliConfig:
    tolerance: float = 1e-15
    max_terms: int = 10_000
    quad_tol: float = 1e-12
    output_format: str = "text"
    method: str = "auto"

    def series_control(self) -> SeriesControl:
        return SeriesControl(rel_tol=self.tolerance, max_terms=self.max_terms)

    def quad_control(self) -> QuadratureControl:
        return QuadratureControl(abs_tol=self.quad_tol, rel_tol=self.quad_tol)


def _default_tolerance() -> float:
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None:
        return CliConfig.tolerance
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{TOLERANCE_ENV} must be a number, got {raw!r}") from None


def _common(tolerance: float) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tolerance", type=float, default=tolerance,
                   help="relative stopping tolerance of every series (default %(default)g)")
    p.add_argument("--max-terms", type=int, default=CliConfig.max_terms)
    p.add_argument("--quad-tol", type=float, default=CliConfig.quad_tol,
                   help="quadrature tolerance (default %(default)g)")
    p.add_argument("--format", dest="output_format", choices=FORMATS, default="text")
    return p


def build_parser(tolerance: float = CliConfig.tolerance) -> argparse.ArgumentParser:
    parser = _Parser(prog="hubbell", description="Generalized Hubbell rectangular-source integral.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common(tolerance)

    ev = sub.add_parser("eval", parents=[common], help="evaluate H[a, b, p, lambda; alpha, beta, gamma]")
    for name in ("a", "b", "p"):
        ev.add_argument(f"--{name}", type=float, required=True)
    ev.add_argument("--lambda", dest="lam", type=float, default=0.0)
    ev.add_argument("--alpha", type=float, default=1.0)
    ev.add_argument("--beta", type=float, default=0.5)
    ev.add_argument("--gamma", type=float, default=1.5)
    ev.add_argument("--sigma", type=float, default=1.0)
    ev.add_argument("--method", choices=METHODS, default="auto")
    ev.set_defaults(func=cmd_eval)

    tb = sub.add_parser("tables", parents=[common], help="reproduce the published comparison tables")
    tb.add_argument("--which", choices=("1", "2", "3", "all"), default="all")
    tb.set_defaults(func=cmd_tables)

    f2 = sub.add_parser("f2", parents=[common], help="Appell F2 utilities")
    for name in ("sigma", "a1", "a2", "b1", "b2", "x", "y"):
        f2.add_argument(f"--{name}", type=float, required=True)
    f2.add_argument("--f2-method", choices=F2_METHODS, default="series")
    f2.add_argument("--n", type=int, default=1, help="recurrence depth for recurrence-check")
    f2.set_defaults(func=cmd_f2)
    return parser


def _config(args) -> CliConfig:
    cfg = CliConfig(
        tolerance=args.tolerance,
        max_terms=args.max_terms,
        quad_tol=args.quad_tol,
        output_format=args.output_format,
        method=getattr(args, "method", "auto"),
    )
    # Build the controls once so bad values fail before any computation.
    cfg.series_control()
    cfg.quad_control()
    return cfg


def _num(x: float, fmt: str) -> str:
    return format(x, ".16g" if fmt == "text" else ".17g")


def _render(fields: dict, fmt: str) -> str:
    """One record as text lines, a JSON object, or a header plus one CSV row."""
    if fmt == "json":
        return json.dumps(fields, indent=2) + "\n"
    cells = {k: _num(v, fmt) if isinstance(v, float) else str(v) for k, v in fields.items()}
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cells.keys())
        writer.writerow(cells.values())
        return buf.getvalue()
    width = max(map(len, cells))
    return "".join(f"{k:<{width}}  {v}\n" for k, v in cells.items())


def _json_safe(fields: dict) -> dict:
    # Round-trip 17 significant digits for every float.
    return {k: float(format(v, ".17g")) if isinstance(v, float) else v for k, v in fields.items()}


def _emit(fields: dict, fmt: str) -> None:
    if fmt == "json":
        fields = _json_safe(fields)
    sys.stdout.write(_render(fields, fmt))


def cmd_eval(args) -> int:
    cfg = _config(args)
    params = HubbellParams(args.a, args.b, args.p, args.lam, args.alpha, args.beta, args.gamma, args.sigma)
    if cfg.method == "closed" and params.shape() != HALF_CASE:
        raise UsageError(
            "--method closed needs (lambda, alpha, beta, gamma) = (1, 0.5, 0.5, 1), "
            f"got {params.shape()}"
        )
    params.validate()
    if cfg.method == "closed":
        res = eval_h_closed_half(params.a, params.b, params.p, params.sigma, cfg.series_control())
    elif cfg.method == "quadrature":
        res = quad_h_general(params, cfg.quad_control())
    else:
        res = eval_h_general(params, cfg.series_control())
    fields = {
        "value": res.value,
        "terms_used": res.terms_used,
        "est_error": res.est_error,
        "method": str(res.method),
        "converged": res.converged,
    }
    if cfg.output_format == "json":
        fields["params"] = params.as_dict()
    _emit(fields, cfg.output_format)
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_tables(args) -> int:
    cfg = _config(args)
    ids = TABLE_IDS if args.which == "all" else (f"T{args.which}",)
    rows = []
    for tid in ids:
        rows.extend(run_table(tid, cfg.series_control(), cfg.quad_control()))
    sys.stdout.write(emit_report(rows, cfg.output_format))
    short = [r for r in rows if not row_meets_criteria(r)]
    for row in short:
        q = row.inputs
        print(f"{row.table_id} row a={q.a:g} b={q.b:g} p={q.p:g} falls short: {'; '.join(row.flags)}",
              file=sys.stderr)
    return EXIT_TABLE_MISMATCH if short else EXIT_OK


def cmd_f2(args) -> int:
    cfg = _config(args)
    ctl = cfg.series_control()
    f2 = F2Args(args.sigma, args.a1, args.a2, args.b1, args.b2, args.x, args.y)
    if args.f2_method == "recurrence-check":
        if args.n < 1:
            raise UsageError(f"--n must be a positive integer, got {args.n}")
        lowered = F2Args(f2.sigma, f2.a1, f2.a2 - args.n, f2.b1, f2.b2, f2.x, f2.y)
        lhs = f2_double_series(lowered, ctl)
        rhs = f2_recurrence_step(f2, args.n, ctl)
        fields = {
            "lhs": lhs.value,
            "rhs": rhs.value,
            "difference": lhs.value - rhs.value,
            "terms_used": lhs.terms_used + rhs.terms_used,
            "converged": lhs.converged and rhs.converged,
        }
        _emit(fields, cfg.output_format)
        return EXIT_OK if fields["converged"] else EXIT_NOT_CONVERGED
    fn = f2_double_series if args.f2_method == "series" else f2_reduce_to_2f1
    res = fn(f2, ctl)
    _emit(
        {
            "value": res.value,
            "terms_used": res.terms_used,
            "est_error": res.est_error,
            "method": str(res.method),
            "converged": res.converged,
        },
        cfg.output_format,
    )
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def _show_warning(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def main(argv=None) -> int:
    try:
        parser = build_parser(_default_tolerance())
    except UsageError as exc:
        print(f"hubbell: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    args = parser.parse_args(argv)
    with warnings.catch_warnings():
        warnings.simplefilter("always", NotConvergedWarning)
        warnings.showwarning = _show_warning
        try:
            return args.func(args)
        except (HubbellError, UsageError, ValueError) as exc:
            print(f"hubbell {args.command}: error: {exc}", file=sys.stderr)
            return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
