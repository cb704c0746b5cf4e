"""Regenerate the bundled synthetic corpus under corpus/.

Every trace in the corpus is synthetic: either produced by ``certpoly gen``
or by the random-meet/random-mix builders below.  Nothing comes from a real
program analysis.
"""

import argparse
import random
from pathlib import Path

from certpoly import trace as T
from certpoly.generators import SystemConfig, random_around_point, random_system


def random_meets(seed: int, count: int = 100) -> str:
    rng = random.Random(seed)
    cfg = SystemConfig()
    ops = []
    for i in range(count):
        n = rng.randint(1, cfg.max_vars)
        gen = random_around_point if rng.random() < 0.7 else random_system
        ops.append(T.Define(f"A{i}", n, tuple(gen(rng, n, cfg))))
        ops.append(T.Define(f"B{i}", n, tuple(gen(rng, n, cfg))))
        ops.append(T.Meet(f"M{i}", f"A{i}", f"B{i}"))
    return f"# synthetic trace: {count} random meets, seed {seed}\n" + T.format_trace(ops)


def random_mix(seed: int, count: int = 60) -> str:
    rng = random.Random(seed)
    cfg = SystemConfig()
    ops = []
    for i in range(count):
        n = rng.randint(2, cfg.max_vars)
        a, b = f"A{i}", f"B{i}"
        ops.append(T.Define(a, n, tuple(random_around_point(rng, n, cfg))))
        ops.append(T.Define(b, n, tuple(random_around_point(rng, n, cfg))))
        kind = rng.choice(["meet", "join", "project", "assign", "incl"])
        if kind == "meet":
            ops.append(T.Meet(f"R{i}", a, b))
        elif kind == "join":
            ops.append(T.Join(f"R{i}", a, b))
            ops.append(T.Inclusion(a, f"R{i}", True))
            ops.append(T.Inclusion(b, f"R{i}", True))
        elif kind == "project":
            ops.append(T.Project(f"R{i}", a, tuple(sorted(rng.sample(range(n), rng.randint(1, n - 1))))))
        elif kind == "assign":
            v = rng.randrange(n)
            term = {w: rng.randint(-3, 3) for w in range(n) if rng.random() < 0.5}
            asg = ((v, T.SparseVector.of({w: c for w, c in term.items() if c}), T.Q(rng.randint(-5, 5))),)
            ops.append(T.Assign(f"R{i}", a, asg))
        else:
            ops.append(T.Inclusion(a, b))
    return f"# synthetic trace: {count} random mixed operations, seed {seed}\n" + T.format_trace(ops)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "corpus"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for profile in T.PROFILES:
        for seed in (1, 2, 3):
            (out / f"{profile}_{seed}.trace").write_text(T.gen(seed, profile))
    (out / "random_meets.trace").write_text(random_meets(7))
    (out / "random_mix.trace").write_text(random_mix(11))
    print(f"wrote corpus to {out}")


if __name__ == "__main__":
    main()
