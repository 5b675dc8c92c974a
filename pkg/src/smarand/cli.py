"""Command-line front end with reproducible CSV outputs.

Every run that writes CSV also writes a `<output>.manifest` sidecar
recording the command line, the parameter map, the tool version, elapsed
time, and a SHA-256 digest of the CSV bytes.  Identical invocations
reproduce the digest bit for bit, at any parallelism degree.

Exit codes: 0 success, 1 suite failure or indeterminate comparison,
2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .arith import ExponentK, factorize
from .asymptotics import (
    DIAGNOSTIC_CSV_HEADER,
    diagnostic_from_count,
    ivic_bound_core,
    theorem2_diagnostic,
)
from .census import (
    CSV_HEADER,
    census_csv_rows,
    count_M,
    count_Nk,
    count_Nk_by_divisors,
    count_S_neq_P,
    psi_smooth_count,
)
from .enclosure import IndeterminateComparisonError
from .irrationality import (
    APPROX_CSV_HEADER,
    check_sondow_inequality,
    e_convergents,
    round_e_multiple,
)
from .smarandache import build_table, largest_prime_factor, smarandache
from .suites import SUITE_CSV_HEADER, SUITE_NAMES, run_suites

__all__ = ["main"]


def _parse_exact_int(text: str) -> int:
    """Exact integer from plain or scientific notation; rejects fractions."""
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value != value.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _parse_k(text: str) -> ExponentK:
    try:
        return ExponentK.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _parse_x_list(text: str) -> List[int]:
    return [_parse_exact_int(part) for part in text.split(",") if part.strip()]


def _parse_epsilon(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            eps = Fraction(int(num), int(den))
        else:
            eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")
    if eps < 0:
        raise argparse.ArgumentTypeError("epsilon must be nonnegative")
    return eps


def _write_output(
    rows: Sequence[str],
    out: Optional[str],
    argv: Sequence[str],
    params: Dict[str, str],
    elapsed: float,
) -> str:
    payload = "\n".join(rows) + "\n"
    data = payload.encode()
    digest = hashlib.sha256(data).hexdigest()
    if out:
        path = Path(out)
        path.write_bytes(data)
        manifest = [f"command: smarand {' '.join(argv)}"]
        manifest.extend(f"param.{k}: {v}" for k, v in sorted(params.items()))
        manifest.append(f"version: {__version__}")
        manifest.append(f"elapsed_seconds: {elapsed:.3f}")
        manifest.append(f"sha256: {digest}")
        Path(str(path) + ".manifest").write_text("\n".join(manifest) + "\n")
    else:
        sys.stdout.write(payload)
    return digest


def _cmd_eval(args, argv) -> int:
    n = args.n
    f = factorize(n)
    s = smarandache(n)
    p = largest_prime_factor(n)
    fact_text = " * ".join(
        f"{q}^{a}" if a > 1 else str(q) for q, a in f.factors
    ) or "1"
    print(f"n = {n}")
    print(f"S(n) = {s}")
    print(f"P(n) = {p}")
    print(f"factorization = {fact_text}")
    print(f"S(n) != P(n): {'yes' if s != p else 'no'}")
    return 0


def _cmd_census(args, argv, parser) -> int:
    kind = args.kind
    if kind == "psi" and args.y is None:
        parser.error("--kind psi requires --y")
    if kind != "psi" and args.y is not None:
        parser.error("--y only applies to --kind psi")
    if kind == "nk" and args.k is None:
        parser.error("--kind nk requires --k")
    if kind != "nk" and args.k is not None:
        parser.error("--k only applies to --kind nk")
    x = args.x
    limit = args.table_limit if args.table_limit else x
    if limit < x:
        parser.error(f"--table-limit {limit} is below --x {x}")
    start = time.perf_counter()
    table = build_table(limit)
    if kind == "n-neq-p":
        report = count_S_neq_P(x, table, threads=args.threads)
    elif kind == "nk":
        report = count_Nk(x, args.k, table, threads=args.threads)
    elif kind == "m":
        report = count_M(x, table)
    else:
        report = psi_smooth_count(x, args.y, table, threads=args.threads)
    rows = [CSV_HEADER] + census_csv_rows(report)
    elapsed = time.perf_counter() - start
    params = {"kind": kind, "x": str(x), "threads": str(args.threads)}
    if args.k is not None:
        params["k"] = str(args.k)
    if args.y is not None:
        params["y"] = str(args.y)
    digest = _write_output(rows, args.out, argv, params, elapsed)
    if args.out:
        print(f"wrote {args.out} ({report.count} counted, sha256 {digest[:12]})")
    return 0


def _cmd_verify(args, argv) -> int:
    start = time.perf_counter()
    checks = run_suites(args.suite, threads=args.threads)
    rows = [SUITE_CSV_HEADER] + [c.csv_row() for c in checks]
    elapsed = time.perf_counter() - start
    params = {"suite": args.suite, "threads": str(args.threads)}
    if args.out:
        _write_output(rows, args.out, argv, params, elapsed)
    failed = [c for c in checks if not c.ok]
    for c in checks:
        print(("PASS" if c.ok else "FAIL") + f" {c.suite}/{c.check}: {c.detail}")
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed in {elapsed:.1f}s")
    return 1 if failed else 0


def _cmd_sweep(args, argv, parser) -> int:
    xs = args.x
    if not xs:
        parser.error("empty --x grid")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        parser.error("--x grid must be strictly increasing")
    if min(xs) < 17:
        parser.error("sweep needs x >= 17")
    if args.kind == "thm1" and args.k is None:
        parser.error("--kind thm1 requires --k")
    if args.kind == "thm2" and args.k is not None:
        parser.error("--k does not apply to --kind thm2")
    start = time.perf_counter()
    rows = [DIAGNOSTIC_CSV_HEADER]
    if args.kind == "thm1":
        for x in xs:
            report = count_Nk_by_divisors(x, args.k)
            rows.append(
                diagnostic_from_count(x, report.count, ivic_bound_core(x), args.k).csv_row()
            )
    else:
        limit = args.table_limit if args.table_limit else max(xs)
        if limit < max(xs):
            parser.error(f"--table-limit {limit} is below the largest x")
        table = build_table(limit)
        for x in xs:
            rows.append(theorem2_diagnostic(x, table).csv_row())
    elapsed = time.perf_counter() - start
    params = {
        "kind": args.kind,
        "x": ",".join(map(str, xs)),
        "threads": str(args.threads),
    }
    if args.k is not None:
        params["k"] = str(args.k)
    digest = _write_output(rows, args.out, argv, params, elapsed)
    if args.out:
        print(f"wrote {args.out} ({len(xs)} rows, sha256 {digest[:12]})")
    return 0


def _cmd_sondow(args, argv) -> int:
    start = time.perf_counter()
    rows = [APPROX_CSV_HEADER]
    table = build_table(args.n_max) if args.n_max >= 2 else None
    for n in range(2, args.n_max + 1):
        m = round_e_multiple(n)
        rows.append(check_sondow_inequality(m, n, epsilon=args.epsilon, table=table).csv_row())
    if args.convergents_max:
        for m, n in e_convergents(args.convergents_max):
            rows.append(check_sondow_inequality(m, n, epsilon=args.epsilon).csv_row())
    elapsed = time.perf_counter() - start
    params = {
        "n_max": str(args.n_max),
        "epsilon": str(args.epsilon),
        "convergents_max": str(args.convergents_max or 0),
    }
    digest = _write_output(rows, args.out, argv, params, elapsed)
    if args.out:
        print(f"wrote {args.out} ({len(rows) - 1} rows, sha256 {digest[:12]})")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smarand",
        description="Exact census of the Smarandache function and the"
        " counting functions built on it.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="S(n), P(n) and the factorization of one n")
    p_eval.add_argument("--n", type=_parse_exact_int, required=True)

    p_census = sub.add_parser("census", help="one exact counting-function value")
    p_census.add_argument(
        "--kind", choices=("n-neq-p", "nk", "m", "psi"), required=True
    )
    p_census.add_argument("--x", type=_parse_exact_int, required=True)
    p_census.add_argument("--k", type=_parse_k)
    p_census.add_argument("--y", type=_parse_exact_int)
    p_census.add_argument("--out")
    p_census.add_argument("--threads", type=int, default=1)
    p_census.add_argument("--table-limit", type=_parse_exact_int)

    p_verify = sub.add_parser("verify", help="run a named verification suite")
    p_verify.add_argument("--suite", choices=SUITE_NAMES, required=True)
    p_verify.add_argument("--out")
    p_verify.add_argument("--threads", type=int, default=1)

    p_sweep = sub.add_parser("sweep", help="bound diagnostics across an x grid")
    p_sweep.add_argument("--kind", choices=("thm1", "thm2"), required=True)
    p_sweep.add_argument("--x", type=_parse_x_list, required=True)
    p_sweep.add_argument("--k", type=_parse_k)
    p_sweep.add_argument("--out")
    p_sweep.add_argument("--threads", type=int, default=1)
    p_sweep.add_argument("--table-limit", type=_parse_exact_int)

    p_sondow = sub.add_parser(
        "sondow", help="per-denominator gap and bound records for e"
    )
    p_sondow.add_argument("--n-max", type=_parse_exact_int, required=True)
    p_sondow.add_argument("--epsilon", type=_parse_epsilon, default=Fraction(0))
    p_sondow.add_argument("--convergents-max", type=_parse_exact_int)
    p_sondow.add_argument("--out")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eval":
            return _cmd_eval(args, argv)
        if args.command == "census":
            return _cmd_census(args, argv, parser)
        if args.command == "verify":
            return _cmd_verify(args, argv)
        if args.command == "sondow":
            return _cmd_sondow(args, argv)
        return _cmd_sweep(args, argv, parser)
    except IndeterminateComparisonError as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
