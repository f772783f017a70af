"""Command line interface.

Exit codes: 0 success (or Embeds / holds-on-grid), 1 Obstructed / violated,
2 usage error, 3 internal-consistency failure, 4 decision exceeds size limits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction

from . import analysis, capacity, decide, genfunc, sequences
from .errors import DecisionTooLargeError, InternalConsistencyError, ParameterError

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL, EXIT_LIMIT = 0, 1, 2, 3, 4


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL.match(text):
        raise argparse.ArgumentTypeError(f"expected an integer or p/q, got {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise argparse.ArgumentTypeError(f"zero denominator in {text!r}") from None


def parse_pair(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected a,b got {text!r}")
    return parse_rational(parts[0]), parse_rational(parts[1])


def parse_sweep(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected lo:hi:step got {text!r}")
    lo, hi, step = (parse_rational(p) for p in parts)
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("sweep needs lo <= hi and step > 0")
    return lo, hi, step


def _positive_int_arg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _nonnegative_int_arg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return v


def _plain(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def render(command: str, parameters: dict, rows: list[dict], fmt: str) -> str:
    """Serialise one invocation.  JSON is canonical: fixed key order, rationals as strings."""
    rows = [_plain(r) for r in rows]
    if fmt == "json":
        doc = {"command": command, "parameters": _plain(parameters), "rows": rows}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: "" if v is None else v for k, v in r.items()})
    return buf.getvalue()


def _ints(*values: Fraction) -> list[int]:
    for v in values:
        if v.denominator != 1:
            raise ParameterError(f"this command needs integer parameters, got {v}")
    return [int(v) for v in values]


def cmd_capacities(args):
    e = sequences.Ellipsoid(args.a, args.b)
    values = sequences.gen_capacities(e, args.count)
    rows = [{"index": j, "value": v} for j, v in enumerate(values)]
    return {"a": args.a, "b": args.b, "count": args.count}, rows, EXIT_OK


def _decision_row(out: decide.DecisionOutcome) -> dict:
    counts = out.witness_counts or (None, None)
    return {
        "verdict": out.verdict.value,
        "witness": out.witness,
        "source_count": counts[0],
        "target_count": counts[1],
        "scale": out.scale,
        "frame": ",".join(map(str, out.frame)),
        "method": out.method,
    }


def cmd_decide(args):
    (a, b), (c, d) = args.src, args.dst
    out = decide.embeds(a, b, c, d)
    params = {"src": [a, b], "dst": [c, d]}
    return params, [_decision_row(out)], EXIT_OK if out.embeds else EXIT_NEGATIVE


_COUNT_METHODS = ("oracle", "capacities", "series", "recurrence", "epsilon")


def cmd_counts(args):
    params = {"a": args.a, "b": args.b, "n": args.n, "method": args.method}
    if args.method == "capacities":
        values = list(sequences.counts_from_capacities(sequences.Ellipsoid(args.a, args.b), args.n).values)
    else:
        a, b = _ints(args.a, args.b)
        if args.method == "oracle":
            wanted = range(args.n + 1) if args.all else [args.n]
            return params, [{"n": n, "count": sequences.count_lattice_oracle(a, b, n)} for n in wanted], EXIT_OK
        if args.method == "series":
            values = genfunc.series_coefficients(genfunc.generating_function(a, b), args.n + 1)
        elif args.method == "recurrence":
            values = genfunc.seven_term_recurrence(a, b, args.n + 1)
        else:
            values = genfunc.counts_via_epsilon(genfunc.build_epsilon_table(a, b), args.n)
    wanted = range(args.n + 1) if args.all else [args.n]
    return params, [{"n": n, "count": values[n]} for n in wanted], EXIT_OK


def cmd_gf(args):
    a, b = _ints(args.a, args.b)
    params = {"a": a, "b": b}
    if args.epsilon:
        table = genfunc.build_epsilon_table(a, b)
        params.update(epsilon=True)
        rows = [
            {"residue": r, "epsilon": e, "period": table.period, "gcd": table.gcd} for r, e in enumerate(table.eps)
        ]
        return params, rows, EXIT_OK
    if args.diff:
        c, d = _ints(*args.diff)
        series = genfunc.difference_series(a, b, c, d)
        params.update(c=c, d=d)
    else:
        series = genfunc.generating_function(a, b)
    params.update(count=args.count)
    rows = [{"n": n, "coefficient": v} for n, v in enumerate(genfunc.series_coefficients(series, args.count))]
    return params, rows, EXIT_OK


def _sweep_values(lo, hi, step):
    v = lo
    while v <= hi:
        yield v
        v += step


def cmd_capacity_fn(args):
    if (args.a is None) == (args.sweep is None):
        raise ParameterError("give exactly one of --a or --sweep")
    values = [args.a] if args.a is not None else list(_sweep_values(*args.sweep))
    results = capacity.capacity_table(values, args.tol)
    params = {"a": args.a, "sweep": None if args.sweep is None else ":".join(map(str, args.sweep)), "tol": args.tol}
    return params, [r.as_row() for r in results], EXIT_OK


def cmd_verify_lemma(args):
    report = analysis.check_factor_inequality(args.a, args.b, args.c, args.d, args.grid)
    params = {"a": args.a, "b": args.b, "c": args.c, "d": args.d, "grid": args.grid}
    rows = []
    for p in report.points:
        row = p.as_row()
        del row["order"]
        rows.append(row)
    prediction = args.a * args.b <= args.c * args.d
    code = EXIT_OK if report.verdict == analysis.HOLDS else EXIT_NEGATIVE
    if prediction and report.verdict != analysis.HOLDS:
        print(f"warning: violation found although ab <= cd at z={report.witness.z}", file=sys.stderr)
    return params, rows, code


def cmd_fill_check(args):
    out = decide.verify_ball_filling(args.n)
    params = {"n": args.n}
    row = _decision_row(out)
    if args.convolution is not None:
        rep = decide.convolution_identity_check(args.n, args.convolution)
        params["convolution"] = args.convolution
        row.update(convolution_rows=len(rep.rows), convolution_holds=rep.all_hold)
    return params, [row], EXIT_OK if out.embeds else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="echembed", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="PATH", help="write to PATH instead of standard output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacities", parents=[common], help="first entries of N(a,b)")
    p.add_argument("--a", type=parse_rational, required=True)
    p.add_argument("--b", type=parse_rational, required=True)
    p.add_argument("--count", type=_positive_int_arg, default=12)
    p.set_defaults(func=cmd_capacities)

    p = sub.add_parser("decide", parents=[common], help="decide int E(src) -> E(dst)")
    p.add_argument("--src", type=parse_pair, required=True, metavar="A,B")
    p.add_argument("--dst", type=parse_pair, required=True, metavar="C,D")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("counts", parents=[common], help="lattice count L_n(a,b)")
    p.add_argument("--a", type=parse_rational, required=True)
    p.add_argument("--b", type=parse_rational, required=True)
    p.add_argument("--n", type=_nonnegative_int_arg, required=True)
    p.add_argument("--method", choices=_COUNT_METHODS, default="oracle")
    p.add_argument("--all", action="store_true", help="emit L_0..L_n")
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("gf", parents=[common], help="coefficients of g_{a,b}, G_{a,b,c,d}, or the increment table")
    p.add_argument("--a", type=parse_rational, required=True)
    p.add_argument("--b", type=parse_rational, required=True)
    p.add_argument("--diff", type=parse_pair, metavar="C,D")
    p.add_argument("--count", type=_positive_int_arg, default=20)
    p.add_argument("--epsilon", action="store_true")
    p.set_defaults(func=cmd_gf)

    p = sub.add_parser("capacity-fn", parents=[common], help="certified interval for c(a)")
    p.add_argument("--a", type=parse_rational)
    p.add_argument("--sweep", type=parse_sweep, metavar="LO:HI:STEP")
    p.add_argument("--tol", type=parse_rational, default=Fraction(1, 1000))
    p.set_defaults(func=cmd_capacity_fn)

    p = sub.add_parser("verify-lemma", parents=[common], help="sample g_{a,b} >= g_{c,d} on [0,1)")
    for name in "abcd":
        p.add_argument(f"--{name}", type=parse_rational, required=True)
    p.add_argument("--grid", type=_positive_int_arg, default=16)
    p.set_defaults(func=cmd_verify_lemma)

    p = sub.add_parser("fill-check", parents=[common], help="decide int E(1,n^2) -> B(n)")
    p.add_argument("--n", type=_positive_int_arg, required=True)
    p.add_argument("--convolution", type=_nonnegative_int_arg, metavar="N_MAX")
    p.set_defaults(func=cmd_fill_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params, rows, code = args.func(args)
    except ParameterError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalConsistencyError as exc:
        print(f"{parser.prog} {args.command}: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except DecisionTooLargeError as exc:
        print(f"{parser.prog} {args.command}: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    text = render(args.command, params, rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
