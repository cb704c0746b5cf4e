from hypothesis import given

from certpoly import oracles as O
from certpoly.constraint import Cmp, Constraint, parse_constraint, satisfies
from certpoly.numeric import Q
from strategies import systems


def cs(*texts):
    return [parse_constraint(t) for t in texts]


def test_point_and_feasible():
    assert O.point(cs("x0 + x1 <= 1", "x0 >= 1", "x1 >= 0"), 2) == [1, 0]
    assert not O.feasible(cs("x0 < 0", "x0 >= 0"), 1)
    assert O.feasible(cs("x0 < 1", "x0 > 0"), 1)
    p = O.point(cs("x0 < 1", "x0 > 0"), 1)
    assert 0 < p[0] < 1


@given(systems(nvars=3, max_size=5))
def test_point_satisfies_system(s):
    p = O.point(s, 3)
    if p is not None:
        assert all(satisfies(c, dict(enumerate(p))) for c in s)


def test_entails_and_equivalent():
    box = cs("x0 >= 0", "x0 <= 1")
    assert O.entails(box, parse_constraint("x0 <= 2"), 1)
    assert not O.entails(box, parse_constraint("x0 < 1"), 1)
    assert O.entails(cs("x0 <= 0", "x0 >= 0"), parse_constraint("x0 = 0"), 1)
    assert O.equivalent(box, cs("2*x0 <= 2", "x0 >= 0", "x0 <= 5"), 1)


def test_fm_project_example():
    out = O.fm_project(cs("x1 <= 1", "2*x0 + x1 <= 2", "-1*x0 + -1*x1 <= 1"), [0])
    assert len(out) == 2
    assert O.equivalent(out, cs("x1 <= 1", "-1*x1 <= 4"), 2)


def test_redundancy_and_implicit_equalities():
    s = cs("x0 <= 1", "x0 <= 2", "x1 <= 0", "x1 >= 0")
    assert O.redundant_among(s, 2) == [1]
    assert O.drop_one(s, 2) == [s[0], s[2], s[3]]
    assert O.implicit_equalities(s, 2) == [2, 3]


def test_bounded_vertices_hull():
    tri = cs("x0 >= 0", "x1 >= 0", "x0 + x1 <= 1")
    assert O.bounded(tri, 2) and not O.bounded(tri[:2], 2)
    vs = O.vertices(tri, 2)
    assert sorted(map(tuple, vs)) == [(0, 0), (0, 1), (1, 0)]
    assert O.equivalent(O.hull(vs, 2), tri, 2)
    # degenerate hulls: a point and a segment
    assert O.equivalent(O.hull([[1, 2]], 2), cs("x0 = 1", "x1 = 2"), 2)
    assert O.equivalent(O.hull([[0, 0], [2, 2]], 2), cs("x0 + -1*x1 = 0", "x0 >= 0", "x0 <= 2"), 2)
    assert not O.feasible(O.hull([], 2), 2)
