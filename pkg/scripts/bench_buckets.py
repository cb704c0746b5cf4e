"""Replay traces and print per-operator, per-size-bucket timings.

Problem size is the summed constraint count of the operands; trivial
problems (size 0 or 1) are kept in the table but left out of the totals.
"""

import argparse
import json
import sys
from pathlib import Path

from certpoly import trace as T


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("traces", nargs="*", help="trace files (default: corpus/*.trace)")
    ap.add_argument("--json", help="write the merged report here")
    args = ap.parse_args(argv)
    paths = [Path(p) for p in args.traces] or sorted(Path(__file__).resolve().parent.parent.glob("corpus/*.trace"))
    merged = T.RunReport()
    for path in paths:
        rep = T.replay(T.parse(path.read_text()))
        merged.records.extend(rep.records)
        merged.notices.extend(rep.notices)
        print(f"{path.name}: {len(rep.records)} ops")
    print()
    print(merged.format_table())
    print()
    for op, t in sorted(merged.totals().items()):
        print(f"{op:<8} {t['count']:>6} non-trivial  total {t['total'] * 1e3:9.2f} ms  median {t['median'] * 1e3:7.3f} ms")
    if args.json:
        Path(args.json).write_text(merged.to_json())
    return 0


if __name__ == "__main__":
    sys.exit(main())
