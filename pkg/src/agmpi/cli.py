"""Command line front end: ``pi <compute|table|verify|bench>``.

Exit codes: 0 success, 1 internal error, 2 usage error, 3 precision ceiling
exceeded, 4 identity check failure.  Output is deterministic byte for byte
for a given command line (the bench timing column excepted), so downstream
tooling can diff runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from enum import Enum

from gmpy2 import mpfr

from . import agm, borwein
from .precision import (
    DEFAULT_GUARD_BITS,
    MAX_DECIMAL_DIGITS,
    PrecisionCeilingError,
    count_radicals,
    make_context,
    to_decimal,
    workspace,
)
from .verify import check_identities, convergence_orders, correct_digits, machin_pi

__all__ = ["OutputFormat", "cmd_bench", "cmd_compute", "cmd_table", "cmd_verify", "main"]


class OutputFormat(str, Enum):
    TEXT = "text"
    CSV = "csv"
    JSON = "json"


_ALGORITHMS = [a.value for a in borwein.AlgorithmId]

TABLE_HEADER = ["n", "estimate", "abs_error", "correct_digits", "local_order"]
VERIFY_HEADER = [
    "identity",
    "max_residual",
    "tolerance",
    "pass",
    "flagged",
    "n_lo",
    "n_hi",
    "note",
]
BENCH_HEADER = [
    "algorithm",
    "iterations",
    "sqrt_calls",
    "root_calls",
    "correct_digits",
    "seconds",
]


def _sci(x, sig: int = 3) -> str:
    """Fixed-width scientific rendering that survives exponents beyond float range."""
    if x == 0:
        return "0"
    mant, exp, _ = x.digits(10, sig)
    neg = mant.startswith("-")
    if neg:
        mant = mant[1:]
    body = mant[0] + ("." + mant[1:] if sig > 1 else "")
    return ("-" if neg else "") + body + f"e{exp - 1:+03d}"


def _bool_str(value: bool) -> str:
    return "true" if value else "false"


def _emit(payload: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="ascii") as handle:
            handle.write(payload)
        print(f"wrote {out_path}", file=sys.stderr)
    else:
        sys.stdout.write(payload)


def _csv_payload(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _json_payload(header, rows) -> str:
    lines = []
    for row in rows:
        lines.append(json.dumps(dict(zip(header, row))))
    return "\n".join(lines) + "\n"


def _converge(algorithm: borwein.AlgorithmId, ctx, digits: int):
    """Iterate until successive estimates agree to ``digits``; return (pi, iterations)."""
    if algorithm is borwein.AlgorithmId.SALAMIN_BRENT:
        estimate, trace = agm.salamin_brent_pi(ctx)
        return estimate, len(trace)
    with workspace(ctx):
        threshold = mpfr(10) ** (-(digits + 1))
    state = borwein.init(algorithm, ctx)
    previous = state.estimate
    while True:
        state = borwein.step(state, ctx)
        with workspace(ctx):
            done = abs(state.estimate - previous) <= threshold
        if done:
            break
        previous = state.estimate
        if state.n > 10_000:
            raise RuntimeError("iteration failed to converge")
    with workspace(ctx):
        return 1 / state.estimate, state.n


def _grouped_digits(rendered: str) -> str:
    # rendered is "3.1415..."; regroup the fractional part as 10-digit
    # blocks, five blocks per line, first line prefixed with "3.".
    integer_part, _, frac = rendered.partition(".")
    groups = [frac[i : i + 10] for i in range(0, len(frac), 10)]
    lines = []
    for i in range(0, len(groups), 5):
        chunk = " ".join(groups[i : i + 5])
        if i == 0:
            chunk = integer_part + "." + chunk
        lines.append(chunk)
    return "\n".join(lines) + "\n"


def cmd_compute(opts: argparse.Namespace) -> int:
    algorithm = borwein.AlgorithmId(opts.algorithm)
    ctx = make_context(opts.digits + 12, guard_bits=opts.guard_bits)
    estimate, _ = _converge(algorithm, ctx, opts.digits + 10)
    # Render with a ten-digit tail and truncate: the output is the leading
    # slice of the decimal expansion, not a value rounded at the last place.
    rendered = to_decimal(estimate, opts.digits + 11)[: opts.digits + 2]
    fmt = OutputFormat(opts.fmt)
    if opts.raw:
        payload = rendered + "\n"
    elif fmt is OutputFormat.TEXT:
        payload = _grouped_digits(rendered)
    elif fmt is OutputFormat.CSV:
        payload = _csv_payload(
            ["algorithm", "digits", "estimate"],
            [[algorithm.value, opts.digits, rendered]],
        )
    else:
        payload = (
            json.dumps(
                {"algorithm": algorithm.value, "digits": opts.digits, "estimate": rendered}
            )
            + "\n"
        )
    _emit(payload, opts.out)
    return 0


def _table_rows(algorithm: borwein.AlgorithmId, iterations: int, ctx):
    oracle = machin_pi(ctx)
    if algorithm is borwein.AlgorithmId.SALAMIN_BRENT:
        state = agm.canonical_start(ctx)
        estimates = []
        for _ in range(iterations + 1):
            state = agm.agm_step(state, ctx)
            with workspace(ctx):
                estimates.append(2 * state.a * state.a / (1 - state.weighted_sum))
    else:
        states = borwein.run(algorithm, iterations, ctx)
        with workspace(ctx):
            estimates = [1 / s.estimate for s in states]
    with workspace(ctx):
        errors = [abs(e - oracle) for e in estimates]
        floor = mpfr(10) ** (-(ctx.decimal_digits + 6))
        tiny = mpfr(10) ** (-(4 * ctx.decimal_digits + 40))
        order_errors = [e if e > 0 else tiny for e in errors]
    orders = convergence_orders(order_errors, floor=floor) if len(errors) >= 3 else []
    rows = []
    for n, estimate in enumerate(estimates):
        order = orders[n - 1] if 1 <= n <= len(orders) else None
        rows.append(
            {
                "n": n,
                "estimate": to_decimal(estimate, ctx.decimal_digits),
                "abs_error": errors[n],
                "correct_digits": correct_digits(estimate, oracle),
                "local_order": order,
            }
        )
    return rows


def cmd_table(opts: argparse.Namespace) -> int:
    algorithm = borwein.AlgorithmId(opts.algorithm)
    ctx = make_context(opts.digits, guard_bits=opts.guard_bits)
    rows = _table_rows(algorithm, opts.iterations, ctx)
    fmt = OutputFormat(opts.fmt)
    if fmt is OutputFormat.CSV:
        payload = _csv_payload(
            TABLE_HEADER,
            [
                [
                    row["n"],
                    row["estimate"],
                    _sci(row["abs_error"]),
                    row["correct_digits"],
                    "" if row["local_order"] is None else f"{row['local_order']:.3f}",
                ]
                for row in rows
            ],
        )
    elif fmt is OutputFormat.JSON:
        lines = []
        for row in rows:
            lines.append(
                json.dumps(
                    {
                        "n": row["n"],
                        "estimate": row["estimate"],
                        "abs_error": _sci(row["abs_error"]),
                        "correct_digits": row["correct_digits"],
                        "local_order": row["local_order"],
                    }
                )
            )
        payload = "\n".join(lines) + "\n"
    else:
        lines = [f"{'n':>3}  {'estimate':<44}  {'abs_error':>10}  {'digits':>7}  {'order':>6}"]
        for row in rows:
            shown = row["estimate"]
            if len(shown) > 44:
                shown = shown[:41] + "..."
            order = "" if row["local_order"] is None else f"{row['local_order']:.3f}"
            lines.append(
                f"{row['n']:>3}  {shown:<44}  {_sci(row['abs_error']):>10}  "
                f"{row['correct_digits']:>7}  {order:>6}"
            )
        payload = "\n".join(lines) + "\n"
    _emit(payload, opts.out)
    return 0


def cmd_verify(opts: argparse.Namespace) -> int:
    ctx = make_context(opts.digits, guard_bits=opts.guard_bits)
    reports = check_identities(opts.iterations, ctx, inject_fault=opts.inject_fault)
    fmt = OutputFormat(opts.fmt)
    rows = [
        [
            report.identity_name,
            _sci(report.max_residual),
            _sci(report.tolerance),
            _bool_str(report.passed),
            _bool_str(report.flagged),
            report.n_lo,
            report.n_hi,
            report.note,
        ]
        for report in reports
    ]
    if fmt is OutputFormat.CSV:
        payload = _csv_payload(VERIFY_HEADER, rows)
    elif fmt is OutputFormat.JSON:
        lines = []
        for report in reports:
            lines.append(
                json.dumps(
                    {
                        "identity": report.identity_name,
                        "max_residual": _sci(report.max_residual),
                        "tolerance": _sci(report.tolerance),
                        "pass": report.passed,
                        "flagged": report.flagged,
                        "n_lo": report.n_lo,
                        "n_hi": report.n_hi,
                        "note": report.note,
                    }
                )
            )
        payload = "\n".join(lines) + "\n"
    else:
        lines = [
            f"{'identity':<34}  {'residual':>10}  {'tolerance':>10}  {'range':>7}  status"
        ]
        for report in reports:
            status = "pass" if report.passed else "FAIL"
            if report.flagged:
                status += " [flagged]"
            lines.append(
                f"{report.identity_name:<34}  {_sci(report.max_residual):>10}  "
                f"{_sci(report.tolerance):>10}  "
                f"{f'{report.n_lo}..{report.n_hi}':>7}  {status}"
            )
            if report.note:
                lines.append(f"{'':<34}  note: {report.note}")
        failed = sum(1 for r in reports if not r.passed and not r.flagged)
        lines.append(f"identities checked: {len(reports)}, hard failures: {failed}")
        payload = "\n".join(lines) + "\n"
    _emit(payload, opts.out)
    hard_failures = [r for r in reports if not r.passed and not r.flagged]
    return 4 if hard_failures else 0


def cmd_bench(opts: argparse.Namespace) -> int:
    ctx = make_context(opts.digits + 2, guard_bits=opts.guard_bits)
    oracle = machin_pi(ctx)
    rows = []
    for algorithm in borwein.AlgorithmId:
        with count_radicals() as counts:
            start = time.perf_counter()
            estimate, iterations = _converge(algorithm, ctx, opts.digits)
            elapsed = time.perf_counter() - start
        rows.append(
            [
                algorithm.value,
                iterations,
                counts.sqrt_calls,
                counts.root_calls,
                correct_digits(estimate, oracle),
                f"{elapsed:.4f}",
            ]
        )
    fmt = OutputFormat(opts.fmt)
    if fmt is OutputFormat.CSV:
        payload = _csv_payload(BENCH_HEADER, rows)
    elif fmt is OutputFormat.JSON:
        lines = []
        for row in rows:
            record = dict(zip(BENCH_HEADER, row))
            record["seconds"] = float(record["seconds"])
            lines.append(json.dumps(record))
        payload = "\n".join(lines) + "\n"
    else:
        lines = [
            f"{'algorithm':<15}  {'iters':>5}  {'sqrt':>5}  {'root':>5}  {'digits':>7}  {'seconds':>8}"
        ]
        for row in rows:
            lines.append(
                f"{row[0]:<15}  {row[1]:>5}  {row[2]:>5}  {row[3]:>5}  {row[4]:>7}  {row[5]:>8}"
            )
        payload = "\n".join(lines) + "\n"
    _emit(payload, opts.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pi",
        description="Compute and cross-verify pi by AGM-family iterations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, algorithm=True, iterations=None, digits=100):
        if algorithm:
            p.add_argument(
                "--algorithm",
                choices=_ALGORITHMS,
                default="quadratic",
                help="iteration to use (default: quadratic)",
            )
        p.add_argument(
            "--digits",
            type=int,
            default=digits,
            help=f"working decimal digits (default: {digits})",
        )
        if iterations is not None:
            p.add_argument(
                "--iterations",
                type=int,
                default=iterations,
                help=f"iteration count (default: {iterations})",
            )
        p.add_argument(
            "--format",
            dest="fmt",
            choices=[f.value for f in OutputFormat],
            default="text",
            help="output format (default: text)",
        )
        p.add_argument("--out", default=None, help="write output to this path")
        p.add_argument(
            "--guard-bits",
            type=int,
            default=None,
            help="guard bits above the digit-derived precision (default: "
            f"APNUM_GUARD_BITS or {DEFAULT_GUARD_BITS})",
        )

    p_compute = sub.add_parser("compute", help="compute pi to a digit count")
    add_common(p_compute)
    p_compute.add_argument(
        "--raw", action="store_true", help="print one ungrouped digit string"
    )
    p_compute.set_defaults(handler=cmd_compute)

    p_table = sub.add_parser("table", help="per-iteration convergence table")
    add_common(p_table, iterations=8)
    p_table.set_defaults(handler=cmd_table)

    p_verify = sub.add_parser("verify", help="check cross-algorithm identities")
    add_common(p_verify, algorithm=False, iterations=6)
    p_verify.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p_verify.set_defaults(handler=cmd_verify)

    p_bench = sub.add_parser("bench", help="compare cost across algorithms")
    add_common(p_bench, algorithm=False, digits=1000)
    p_bench.set_defaults(handler=cmd_bench)

    return parser


def _validate(opts: argparse.Namespace) -> str | None:
    if opts.digits < 1:
        return "--digits must be at least 1"
    if opts.command == "bench" and opts.digits < 100:
        return "bench needs --digits of at least 100"
    if getattr(opts, "iterations", None) is not None:
        if opts.command == "verify" and opts.iterations < 2:
            return "--iterations must be at least 2 for verify"
        if opts.command == "table" and opts.iterations < 1:
            return "--iterations must be at least 1"
    if opts.guard_bits is None:
        env = os.environ.get("APNUM_GUARD_BITS")
        if env is None:
            opts.guard_bits = DEFAULT_GUARD_BITS
        else:
            try:
                opts.guard_bits = int(env)
            except ValueError:
                return f"APNUM_GUARD_BITS must be an integer, got {env!r}"
    if opts.guard_bits < 0:
        return "guard bits must be nonnegative"
    return None


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        opts = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    problem = _validate(opts)
    if problem:
        print(f"pi: {problem}", file=sys.stderr)
        return 2
    if opts.digits > MAX_DECIMAL_DIGITS:
        print(
            f"pi: {opts.digits} digits requested; the supported maximum is "
            f"{MAX_DECIMAL_DIGITS}",
            file=sys.stderr,
        )
        return 3
    try:
        return opts.handler(opts)
    except PrecisionCeilingError as exc:
        print(f"pi: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001  anything else is an internal error
        print(f"pi: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
