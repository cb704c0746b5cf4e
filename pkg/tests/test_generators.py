import random

from certpoly import oracles as O
from certpoly.constraint import canonicalize
from certpoly.generators import SystemConfig, random_around_point, random_constraint, random_system


def test_deterministic_and_in_range():
    cfg = SystemConfig()
    a = random_system(random.Random(4), 3, cfg)
    b = random_system(random.Random(4), 3, cfg)
    assert a == b
    assert 1 <= len(a) <= cfg.max_constraints
    for c in a:
        assert canonicalize(c)[0] == c and c.term
        assert all(v < 3 for v in c.term.keys())


def test_box_option():
    cs = random_system(random.Random(1), 2, SystemConfig(box=5), count=1)
    assert len(cs) == 5 and O.bounded(cs, 2)


def test_random_around_point_is_feasible():
    rng = random.Random(9)
    cfg = SystemConfig(p_strict=0.4, p_eq=0.3)
    for _ in range(50):
        assert O.feasible(random_around_point(rng, 3, cfg), 3)
