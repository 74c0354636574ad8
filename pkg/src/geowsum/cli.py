"""Command-line front end.

    geowsum w --z=-0.6931471805599453 --n=0 --prec=60
    geowsum geosum --a=1 --r=0.5 --branches=0,-1,1000,-1001 [--json | --csv]
    geowsum classify --a=1 --r=0.2
    geowsum reproduce [--manifest=PATH ...] [--report=PATH]
    geowsum eval OPERATION PARAM ...

Exit codes: 0 success, 1 failed golden entries, 2 domain error,
3 convergence failure, 4 I/O or parse error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys

from . import golden
from .branch_sums import GeoSeries, geo_sum_branch
from .classifier import Verdict, classify
from .errors import ConvergenceError, DomainError
from .lambertw import lambert_w
from .precision import DEFAULT_DIGITS, format_complex, format_real, make_context, parse_complex, working

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4

PREC_ENV = "GEOWSUM_PREC"

_RANGE = re.compile(r"^(-?\d+)\.\.(-?\d+)(?:\.\.(-?\d+))?$")


class UsageError(Exception):
    """Bad command line or environment; maps to exit code 4."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_branches(text: str) -> list:
    """Comma-separated integers and inclusive ranges ``lo..hi`` or ``lo..hi..step``."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        m = _RANGE.match(item)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            step = int(m.group(3)) if m.group(3) else (1 if hi >= lo else -1)
            if step == 0 or (hi - lo) * step < 0:
                raise UsageError(f"range {item!r} has a zero or backwards step")
            out.extend(range(lo, hi + (1 if step > 0 else -1), step))
            continue
        try:
            out.append(int(item))
        except ValueError:
            raise UsageError(f"not a branch index or range: {item!r}") from None
    if not out:
        raise UsageError("empty branch list")
    return out


def default_precision() -> int:
    text = os.environ.get(PREC_ENV)
    if text is None or not text.strip():
        return DEFAULT_DIGITS
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{PREC_ENV} must be an integer, got {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands

def cmd_w(args, out) -> int:
    ctx = make_context(args.prec)
    with working(ctx):
        z = parse_complex(args.z)
        value = lambert_w(z, args.n, ctx)
        print(format_complex(value.w, args.prec, compact=True), file=out)
    return EXIT_OK


def cmd_geosum(args, out) -> int:
    ctx = make_context(args.prec)
    branches = parse_branches(args.branches) if args.branches is not None else [args.branch]
    with working(ctx):
        series = GeoSeries(parse_complex(args.a), parse_complex(args.r))
        rows = []
        for n in branches:
            value = geo_sum_branch(series, n, ctx).value
            rows.append((n, format_real(value.real, args.prec), format_real(value.imag, args.prec), value))
    if args.json:
        json.dump([{"branch": n, "re": re_, "im": im} for n, re_, im, _ in rows], out, indent=2)
        out.write("\n")
    elif args.csv:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["branch", "re", "im"])
        writer.writerows((n, re_, im) for n, re_, im, _ in rows)
    else:
        width = max(len(str(n)) for n in branches)
        for n, _, _, value in rows:
            print(f"{n:>{width}}  {format_complex(value, args.prec)}", file=out)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    ctx = make_context(args.prec)
    with working(ctx):
        series = GeoSeries(parse_complex(args.a), parse_complex(args.r))
        report = classify(series, ctx=ctx)
        if report.verdict is Verdict.CONVERGES:
            print(f"Converges → {format_complex(report.limit, args.prec, compact=True)}", file=out)
        else:
            print(report.verdict.value, file=out)
        digits = 12
        width = max(len(str(s.branch)) for s in report.samples)
        print(f"{'branch':>{max(width, 6)}}  {'distance to a/(1-r)':<22}  sum", file=out)
        for s in report.samples:
            print(
                f"{s.branch:>{max(width, 6)}}  {format_real(s.distance, 6):<22}  {format_complex(s.value, digits)}",
                file=out,
            )
        print(f"rationale: {report.rationale}", file=out)
    return EXIT_OK


def cmd_reproduce(args, out) -> int:
    paths = args.manifest or golden.shipped_manifests()
    lines, ok = [], True
    for path in paths:
        entries = golden.load_manifest(path)
        report = golden.reproduce(entries, args.prec)
        lines.append(f"# {path}")
        lines.extend(report.lines())
        ok = ok and report.ok
    text = "\n".join(lines) + "\n"
    out.write(text)
    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise golden.ManifestError(f"cannot write report {args.report}: {exc}") from exc
    return EXIT_OK if ok else EXIT_FAILED


def cmd_eval(args, out) -> int:
    ctx = make_context(args.prec)
    value = golden.evaluate(args.operation, args.params, ctx)
    print(format_complex(value, args.prec, compact=True), file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser(prec: int) -> argparse.ArgumentParser:
    parser = _Parser(prog="geowsum", description="Branch-indexed sums via the complex Lambert W function.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_prec(p):
        p.add_argument("--prec", type=int, default=prec, help=f"significant digits (default {prec}, env {PREC_ENV})")
        return p

    p = with_prec(sub.add_parser("w", help="evaluate W_n(z)"))
    p.add_argument("--z", required=True)
    p.add_argument("--n", type=int, default=0)
    p.set_defaults(func=cmd_w)

    p = with_prec(sub.add_parser("geosum", help="branch sums of a + ar + ar^2 + ..."))
    p.add_argument("--a", default="1")
    p.add_argument("--r", required=True)
    which = p.add_mutually_exclusive_group()
    which.add_argument("--branch", type=int, default=0)
    which.add_argument("--branches", help="e.g. 0,-1,1000 or 0..1000..100")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_geosum)

    p = with_prec(sub.add_parser("classify", help="convergence verdict from a branch sweep"))
    p.add_argument("--a", default="1")
    p.add_argument("--r", required=True)
    p.set_defaults(func=cmd_classify)

    p = with_prec(sub.add_parser("reproduce", help="check golden manifests"))
    p.add_argument("--manifest", action="append", help="manifest path (repeatable; default: shipped manifests)")
    p.add_argument("--report", help="also write the PASS/FAIL lines here")
    p.set_defaults(func=cmd_reproduce)

    p = with_prec(sub.add_parser("eval", help="run one named operation"))
    p.add_argument("operation", choices=sorted(golden.OPERATIONS))
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser(default_precision()).parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except golden.ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
