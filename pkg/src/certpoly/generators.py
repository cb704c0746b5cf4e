"""Seeded random instances for harnesses and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List

from certpoly.constraint import Cmp, Constraint, canonicalize
from certpoly.numeric import Q, SparseVector


@dataclass
class SystemConfig:
    max_vars: int = 4
    max_constraints: int = 8
    coef: int = 10
    # chance that a variable appears in a constraint
    density: float = 0.6
    p_strict: float = 0.1
    p_eq: float = 0.1
    # add -box <= x_i <= box for every variable (0 disables)
    box: int = 0


def random_constraint(rng: random.Random, nvars: int, cfg: SystemConfig) -> Constraint:
    while True:
        term = {v: rng.randint(-cfg.coef, cfg.coef) for v in range(nvars) if rng.random() < cfg.density}
        term = {v: a for v, a in term.items() if a}
        if term:
            break
    r = rng.random()
    cmp = Cmp.LT if r < cfg.p_strict else Cmp.EQ if r < cfg.p_strict + cfg.p_eq else Cmp.LE
    return canonicalize(Constraint(SparseVector.of(term), cmp, Q(rng.randint(-cfg.coef, cfg.coef))))[0]


def random_system(rng: random.Random, nvars: int, cfg: SystemConfig, count: int = -1) -> List[Constraint]:
    if count < 0:
        count = rng.randint(1, cfg.max_constraints)
    out = [random_constraint(rng, nvars, cfg) for _ in range(count)]
    if cfg.box:
        for v in range(nvars):
            out.append(Constraint(SparseVector.unit(v), Cmp.LE, Q(cfg.box)))
            out.append(Constraint(SparseVector.unit(v, -1), Cmp.LE, Q(cfg.box)))
    return out


def random_around_point(rng: random.Random, nvars: int, cfg: SystemConfig, count: int = -1) -> List[Constraint]:
    """A system guaranteed non-empty: every constraint holds at a random point."""
    pt = {v: Q(rng.randint(-3, 3)) for v in range(nvars)}
    out = []
    for c in random_system(rng, nvars, cfg, count):
        val = sum((a * pt[v] for v, a in c.term.items()), Q(0))
        if c.cmp is Cmp.EQ:
            out.append(Constraint(c.term, Cmp.EQ, val))
        else:
            slack = Q(rng.randint(0 if c.cmp is Cmp.LE else 1, 3))
            out.append(Constraint(c.term, c.cmp, val + slack))
    return out
