"""Command line: ``replay``, ``check`` and ``gen``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from certpoly import trace as T
from certpoly.certificate import parse_cert, parse_flat
from certpoly.checker import Value, check
from certpoly.constraint import ParseError


def _replay(args) -> int:
    try:
        ops = T.parse(Path(args.file).read_text())
    except (OSError, T.TraceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    opts = T.ReplayOptions(check_certs=args.check_certs, oracle=args.oracle)
    try:
        report = T.replay(ops, opts)
    except T.ReplayAbort as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1
    if not args.quiet:
        named = [op for op in ops if not isinstance(op, (T.Inclusion, T.AssertEq))]
        for op in named:
            name = op.name if isinstance(op, T.Define) else op.dst
            print(f"{name} = {report.values[name]}")
        for rec in report.records:
            if rec.op == "incl":
                print(f"incl #{rec.index + 1}: {str(rec.answer).lower()}")
    for msg in report.notices:
        print(f"note: {msg}")
    s = report.summary()
    print(f"{s['ops']} ops ({s['trivial']} trivial), certificates {s['certificates']['accepted']}/{s['certificates']['checked']} accepted"
          + (f", oracle {s['oracle']['ok']} ok / {s['oracle']['mismatch']} mismatch / {s['oracle']['skipped']} skipped" if args.oracle else ""))
    if not args.quiet:
        print(report.format_table())
    for f in report.failures:
        print(f"FAIL {f}", file=sys.stderr)
    if args.stats:
        Path(args.stats).write_text(report.to_json())
    return 0 if report.ok else 1


def _check(args) -> int:
    try:
        p1 = parse_flat(Path(args.p1).read_text())
        p2 = parse_flat(Path(args.p2).read_text())
        cert = parse_cert(Path(args.cert).read_text())
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    outcome = check(p1, p2, cert)
    if isinstance(outcome, Value):
        print("Value")
        return 0
    print(f"Error: {outcome.reason}")
    return 1


def _gen(args) -> int:
    text = T.gen(args.seed, args.profile)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="certpoly", description="Certified polyhedra: trace replay and certificate checking.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    r = sub.add_parser("replay", help="replay a trace file")
    r.add_argument("file")
    r.add_argument("--check-certs", action="store_true", help="run every certificate through the checker")
    r.add_argument("--oracle", action="store_true", help="compare results with brute-force oracles (at most 4 variables)")
    r.add_argument("--stats", metavar="OUT", help="write the JSON run report here")
    r.add_argument("-q", "--quiet", action="store_true", help="only print the summary line")
    r.set_defaults(fn=_replay)

    c = sub.add_parser("check", help="check a certificate for P1 <= P2")
    c.add_argument("p1", help="file with lines '<id>: <constraint>'")
    c.add_argument("p2")
    c.add_argument("cert", help="file with 'incl { ... }' or 'empty [...]'")
    c.set_defaults(fn=_check)

    g = sub.add_parser("gen", help="write a synthetic trace")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--profile", choices=T.PROFILES, required=True)
    g.add_argument("-o", "--output")
    g.set_defaults(fn=_gen)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
