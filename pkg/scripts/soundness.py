"""Producer-side soundness harness.

Runs random operator calls (meet, join, project, assign, incl) on small
systems and feeds every certificate to the checker.  Prints a per-operator
summary; exits non-zero if any certificate is rejected.
"""

import argparse
import collections
import random
import sys
import time

import certpoly.domain as D
from certpoly.checker import Value, check
from certpoly.generators import SystemConfig, random_around_point, random_system
from certpoly.numeric import SparseVector

OPS = ("meet", "join", "project", "assign", "incl")


def operand(rng, n, cfg):
    g = random_around_point if rng.random() < 0.7 else random_system
    return D.from_constraints(n, g(rng, n, cfg))


def call(rng, op, n, cfg):
    a = operand(rng, n, cfg)
    obs = list(a.certs)
    p1 = a.value
    p2 = None
    if op in ("meet", "join", "incl"):
        b = operand(rng, n, cfg)
        obs.extend(b.certs)
        p2 = b.value
    t0 = time.perf_counter()
    if op == "meet":
        res = D.meet(p1, p2)
    elif op == "join":
        res = D.join(p1, p2)
    elif op == "project":
        res = D.project(p1, rng.sample(range(n), rng.randint(1, n)))
    elif op == "assign":
        vs = rng.sample(range(n), rng.randint(1, min(2, n)))
        res = D.assign(p1, [(v, SparseVector.of({w: rng.randint(-cfg.coef, cfg.coef) for w in range(n)}), rng.randint(-cfg.coef, cfg.coef)) for v in vs])
    else:
        cert = D.incl(p1, p2)
        res = D.CertifiedResult(p1, () if cert is None else (D.Obligation("incl", p1.flat(), p2.flat(), cert),))
    dt = time.perf_counter() - t0
    return dt, obs + list(res.certs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--calls", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-vars", type=int, default=4)
    ap.add_argument("--max-constraints", type=int, default=8)
    ap.add_argument("--coef", type=int, default=10)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    cfg = SystemConfig(max_vars=args.max_vars, max_constraints=args.max_constraints, coef=args.coef)
    seconds = collections.Counter()
    counts = collections.Counter()
    certs = rejected = 0
    for i in range(args.calls):
        op = OPS[i % len(OPS)]
        dt, obs = call(rng, op, rng.randint(1, cfg.max_vars), cfg)
        seconds[op] += dt
        counts[op] += 1
        for ob in obs:
            certs += 1
            out = check(ob.lhs, ob.rhs, ob.cert)
            if not isinstance(out, Value):
                rejected += 1
                print(f"rejected ({ob.what}): {out.reason}\n  {ob.cert}", file=sys.stderr)
    for op in OPS:
        if counts[op]:
            print(f"{op:<8} {counts[op]:>6} calls  {seconds[op]:8.2f} s  {seconds[op] / counts[op] * 1e3:7.2f} ms/call")
    print(f"certificates: {certs - rejected}/{certs} accepted")
    return 1 if rejected else 0


if __name__ == "__main__":
    sys.exit(main())
