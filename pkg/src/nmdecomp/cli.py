"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical/method error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import fileio
from .decomposition import ALL_KINDS, as_kind, biewen_decompose, run_series
from .errors import DataError, MethodError
from .ipf import IpfConfig, ipf_fit
from .ll import is_nonnegative_sorting, ll_generalized, ll_simplified
from .nm import nm_transform
from .tables import dichotomize, homogamy_share, margins

OUTPUT_DIR_ENV = "NMDECOMP_OUTPUT_DIR"

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_METHOD = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="output format (default: csv)")
    p.add_argument("--out", metavar="PATH",
                   help=f"write the result to PATH instead of stdout; relative paths "
                        f"resolve against ${OUTPUT_DIR_ENV} when it is set")


def _add_mode(p):
    p.add_argument("--mode", choices=("integer", "continuous"), default="integer",
                   help="Q- policy: floor Q (integer, default) or use Q as is")


def _add_ipf(p):
    p.add_argument("--tol", type=float, default=IpfConfig.tolerance,
                   help="IPF tolerance on relative margin deviation")
    p.add_argument("--max-iter", type=int, default=IpfConfig.max_iterations,
                   help="IPF iteration cap")


def _add_method(p):
    p.add_argument("--method", type=str.lower, choices=("nm", "ipf"), default="nm")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nmdecomp", description=(
        "Counterfactual couple tables (NM / IPF), Liu-Lu sorting indicators and "
        "Biewen decompositions of the homogamy share."))
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ll", help="generalized LL sorting matrix of a table")
    p.add_argument("table")
    _add_mode(p)
    _add_output(p)

    for name, helptext in (("nm", "NM counterfactual table"), ("ipf", "IPF counterfactual table")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("source", help="table supplying the degree of sorting")
        p.add_argument("--target", required=True,
                       help="table whose row and column totals are imposed")
        if name == "nm":
            _add_mode(p)
        else:
            _add_ipf(p)
        _add_output(p)

    p = sub.add_parser("decompose", help="Biewen decomposition between two periods")
    p.add_argument("t0")
    p.add_argument("t1")
    _add_method(p)
    _add_mode(p)
    _add_ipf(p)
    _add_output(p)

    p = sub.add_parser("series", help="observed and counterfactual share series")
    p.add_argument("tables", nargs="+", help="tables in time order")
    _add_method(p)
    p.add_argument("--kinds", default=",".join(k.value for k in ALL_KINDS),
                   help="comma-separated series kinds (default: all)")
    p.add_argument("--base", help="base period; earlier tables are dropped (default: first)")
    p.add_argument("--intermediates", default=None,
                   help="comma-separated periods for the WithIntermediates series")
    _add_mode(p)
    _add_ipf(p)
    _add_output(p)

    p = sub.add_parser("validate", help="check a table file")
    p.add_argument("table")
    _add_mode(p)
    _add_output(p)
    return parser


def _write(args, text):
    if not args.out:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not out.is_absolute():
        out = Path(base) / out
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")


def _emit(args, records, meta):
    if args.format == "json":
        _write(args, fileio.records_to_json(records, meta))
    else:
        _write(args, fileio.records_to_csv(records))


def _ipf_config(args):
    return IpfConfig(tolerance=args.tol, max_iterations=args.max_iter)


def _cmd_ll(args):
    table = fileio.read_table(args.table).table
    sm = ll_generalized(table, args.mode)
    _emit(args, fileio.sorting_records(sm, table),
          {"command": "ll", "period": table.period, "mode": args.mode})


def _cmd_fit(args):
    source = fileio.read_table(args.source).table
    target = margins(fileio.read_table(args.target).table)
    if args.command == "nm":
        cf = nm_transform(source, target, args.mode)
    else:
        cf = ipf_fit(source, target, _ipf_config(args))
    if args.format == "csv":
        # CSV output uses the table file layout so it can be fed back in.
        _write(args, fileio.write_table_csv(cf.table))
        return
    meta = {"command": args.command, "method": cf.method,
            "sorting_period": cf.sorting_period,
            "availability_period": cf.availability_period}
    _emit(args, fileio.table_records(cf.table), meta)


def _cmd_decompose(args):
    t0 = fileio.read_table(args.t0).table
    t1 = fileio.read_table(args.t1).table
    result = biewen_decompose(t0, t1, args.method, args.mode, _ipf_config(args))
    meta = {"command": "decompose", "method": result.method, "mode": args.mode,
            "base_period": result.base_period, "end_period": result.end_period}
    _emit(args, fileio.decomposition_records(result), meta)


def _split_list(text):
    return [s.strip() for s in text.split(",") if s.strip()]


def _cmd_series(args):
    tables = [fileio.read_table(p).table for p in args.tables]
    if args.base is not None:
        periods = [t.period for t in tables]
        if args.base not in periods:
            raise DataError(f"base period {args.base!r} not among inputs {periods}")
        tables = tables[periods.index(args.base):]
    try:
        kinds = [as_kind(k) for k in _split_list(args.kinds)]
    except ValueError as exc:
        raise _UsageError(str(exc))
    inter = _split_list(args.intermediates) if args.intermediates else None
    points = run_series(tables, args.method, kinds, args.mode, _ipf_config(args), inter)
    meta = {"command": "series", "method": args.method.upper(), "mode": args.mode,
            "periods": [t.period for t in tables]}
    _emit(args, fileio.series_records(points), meta)


def _cmd_validate(args):
    table = fileio.read_table(args.table).table
    n, m = table.shape
    records = []
    for i in range(1, n):
        for j in range(1, m):
            d = dichotomize(table, i, j, args.mode)
            try:
                ll = ll_simplified(d)
            except MethodError:
                ll = None
            records.append({"i": i, "j": j, "q": d.q, "q_floor": d.q_floor,
                            "hh": d.hh, "hh_max": d.hh_max,
                            "nonnegative_sorting": is_nonnegative_sorting(d),
                            "ll": ll})
    mg = margins(table)
    meta = {"command": "validate", "period": table.period, "shape": [n, m],
            "grand_total": float(fileio.fmt(mg.grand_total)),
            "homogamy_share": float(fileio.fmt(homogamy_share(table))) if table.is_square else None,
            "valid": True}
    _emit(args, records, meta)


class _UsageError(Exception):
    pass


_COMMANDS = {
    "ll": _cmd_ll,
    "nm": _cmd_fit,
    "ipf": _cmd_fit,
    "decompose": _cmd_decompose,
    "series": _cmd_series,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"nmdecomp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MethodError as exc:
        print(f"nmdecomp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_METHOD
    except (DataError, ValueError, OSError) as exc:
        print(f"nmdecomp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK
