"""
Command-line front end.

Subcommands::

    eval  --family g|f --k K --m M --a A --b B --p P [--method ...] [--tol T]
    roc   --u U --snr-db DB --m M[,M...] --pf log:MIN:MAX:COUNT --out PATH
    cifr  --m M[,M...] --snr-db lin:MIN:MAX:COUNT --gamma-t-db DB --rho R
          [--bandwidth B] [--ssc-corrected] --out PATH

Exit codes: 0 success, 2 domain or non-physical input, 3 convergence
failure, 64 usage error. Reals are written with 17 significant digits so
that every value round-trips exactly.
"""
from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

from .applications import (
    NakagamiChannel,
    SscDiversity,
    capacity_curve,
    db_to_linear,
    roc_curve,
)
from .errors import ConvergenceError, DomainError, NonPhysicalResultError
from .integrals import Method, evaluate
from .params import Family, IntegralSpec

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3
EXIT_USAGE = 64

_METHOD_FLAGS = {
    "auto": "auto",
    "thm1": Method.THM1,
    "thm2": Method.THM2,
    "eq15": Method.EQ15,
    "thm3": Method.THM3,
    "oracle": Method.ORACLE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


def fmt(x: float) -> str:
    return format(x, ".17g")


def _parse_grid(text: str, kind: str) -> list[float]:
    """``kind:MIN:MAX:COUNT`` into a list; endpoints are included."""
    parts = text.split(":")
    if len(parts) != 4 or parts[0] != kind:
        raise DomainError(f"grid must look like {kind}:MIN:MAX:COUNT, got {text!r}")
    try:
        lo, hi, count = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError as exc:
        raise DomainError(f"bad grid {text!r}: {exc}") from None
    if count < 1:
        raise DomainError(f"grid count must be >= 1, got {count}")
    if kind == "log":
        if not (lo > 0.0 and hi > 0.0):
            raise DomainError("log grid bounds must be positive")
        lo_t, hi_t = math.log10(lo), math.log10(hi)
    else:
        lo_t, hi_t = lo, hi
    if count == 1:
        values = [lo_t]
    else:
        step = (hi_t - lo_t) / (count - 1)
        values = [lo_t + i * step for i in range(count - 1)] + [hi_t]
    if kind == "log":
        # pin the endpoints so they survive the log round trip exactly
        values = [10.0 ** v for v in values]
        values[0] = lo
        if count > 1:
            values[-1] = hi
    return values


def _parse_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise DomainError(f"bad list {text!r}: {exc}") from None


def _write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[float]]):
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def _column_tag(m: float) -> str:
    return fmt(m)


def cmd_eval(args) -> int:
    family = Family(args.family.upper())
    spec = IntegralSpec(family, args.k, args.m, args.a, args.b, args.p)
    outcome = evaluate(spec, method=_METHOD_FLAGS[args.method], oracle_rel_tol=args.tol)
    print(f"value={fmt(outcome.value)} method={outcome.method.value} "
          f"err={fmt(outcome.err_estimate)}")
    return EXIT_OK


def cmd_roc(args) -> int:
    pf_grid = _parse_grid(args.pf, "log")
    if not all(0.0 < pf < 1.0 for pf in pf_grid):
        raise DomainError("false-alarm probabilities must lie in (0, 1)")
    m_list = _parse_list(args.m)
    gamma_bar = db_to_linear(args.snr_db)
    columns = []
    header = ["pf"]
    for m in m_list:
        points = roc_curve(NakagamiChannel(m, gamma_bar), args.u, pf_grid)
        columns.append(points)
        header += [f"lambda_m{_column_tag(m)}", f"pmd_m{_column_tag(m)}"]
    rows = []
    for i, pf in enumerate(sorted(pf_grid)):
        row = [pf]
        for points in columns:
            row += [points[i].lam, points[i].pmd]
        rows.append(row)
    _write_csv(args.out, header, rows)
    return EXIT_OK


def cmd_cifr(args) -> int:
    snr_grid = _parse_grid(args.snr_db, "lin")
    m_list = _parse_list(args.m)
    ssc = SscDiversity(args.rho, db_to_linear(args.gamma_t_db))
    curves = capacity_curve(args.bandwidth, m_list, snr_grid, ssc, corrected=args.ssc_corrected)
    header = ["snr_db"] + [f"se_m{_column_tag(m)}" for m in m_list]
    rows = [[db] + [curves[m][i].spectral_efficiency for m in m_list]
            for i, db in enumerate(snr_grid)]
    _write_csv(args.out, header, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="marcum-integrals",
                     description="Marcum-Q integrals and their communication-theory uses.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_eval = sub.add_parser("eval", help="evaluate one G or F integral")
    p_eval.add_argument("--family", required=True, choices=["g", "f", "G", "F"])
    for name in ("k", "m", "a", "b", "p"):
        p_eval.add_argument(f"--{name}", required=True, type=float)
    p_eval.add_argument("--method", default="auto", choices=sorted(_METHOD_FLAGS))
    p_eval.add_argument("--tol", type=float, default=1e-12,
                        help="relative tolerance of the quadrature path")
    p_eval.set_defaults(func=cmd_eval)

    p_roc = sub.add_parser("roc", help="average ROC of an energy detector, as CSV")
    p_roc.add_argument("--u", required=True, type=float)
    p_roc.add_argument("--snr-db", required=True, type=float)
    p_roc.add_argument("--m", required=True)
    p_roc.add_argument("--pf", required=True, help="log:MIN:MAX:COUNT")
    p_roc.add_argument("--out", required=True)
    p_roc.set_defaults(func=cmd_roc)

    p_cifr = sub.add_parser("cifr", help="channel-inversion capacity with SSC, as CSV")
    p_cifr.add_argument("--m", required=True)
    p_cifr.add_argument("--snr-db", required=True, help="lin:MIN:MAX:COUNT")
    p_cifr.add_argument("--gamma-t-db", required=True, type=float)
    p_cifr.add_argument("--rho", required=True, type=float)
    p_cifr.add_argument("--bandwidth", type=float, default=1.0)
    p_cifr.add_argument("--ssc-corrected", action="store_true",
                        help="add the single-branch inverse-SNR term missing from the "
                             "uncorrected expression")
    p_cifr.add_argument("--out", required=True)
    p_cifr.set_defaults(func=cmd_cifr)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    try:
        return args.func(args)
    except NonPhysicalResultError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
