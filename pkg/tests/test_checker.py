import pytest
from hypothesis import given, strategies as st

from certpoly import domain as D
from certpoly.certificate import Empty, Incl, frag
from certpoly.checker import Error, Value, check
from certpoly.constraint import parse_constraint
from certpoly.numeric import Q
from strategies import feasible_systems, systems

SRC = [(0, parse_constraint("x1 <= 1")), (1, parse_constraint("2*x0 + x1 <= 2")), (2, parse_constraint("-1*x0 + -1*x1 <= 1"))]
DST = [(0, parse_constraint("x1 <= 1")), (1, parse_constraint("-1*x1 <= 4"))]
GOOD = Incl(((0, frag([(1, 0)])), (1, frag([(1, 1), (2, 2)]))))


def test_projection_example_accepted():
    assert check(SRC, DST, GOOD) == Value()


@pytest.mark.parametrize(
    "cert, reason",
    [
        (Incl(((0, frag([(1, 0)])),)), "not covered"),
        (Incl(((0, frag([(1, 0)])), (1, frag([(1, 1), (1, 2)])))), "mismatch"),
        (Incl(((0, frag([(1, 0)])), (1, frag([(-1, 1), (2, 2)])))), "negative"),
        (Incl(((0, frag([(1, 0)])), (1, frag([(1, 1), (2, 7)])))), "unknown source"),
        (Incl(((0, frag([(1, 0)])), (1, frag([(1, 1), (2, 2)])), (9, frag([(1, 0)])))), "unknown target"),
        (Incl(((0, frag([(1, 0)])), (0, frag([(1, 0)])), (1, frag([(1, 1), (2, 2)])))), "covered 2 times"),
        (Empty(frag([(1, 0)])), "contradiction"),
    ],
)
def test_bad_certificates_rejected(cert, reason):
    out = check(SRC, DST, cert)
    assert isinstance(out, Error) and reason in out.reason


def test_weaker_target_accepted_stronger_rejected():
    looser = [(0, parse_constraint("-1*x1 <= 10"))]
    assert check(SRC, looser, Incl(((0, frag([(1, 1), (2, 2)])),))) == Value()
    tighter = [(0, parse_constraint("-1*x1 <= 3"))]
    assert isinstance(check(SRC, tighter, Incl(((0, frag([(1, 1), (2, 2)])),))), Error)


def test_strictness():
    src = [(0, parse_constraint("x0 < 1")), (1, parse_constraint("x0 <= 1"))]
    assert check(src, [(0, parse_constraint("x0 < 1"))], Incl(((0, frag([(1, 0)])),))) == Value()
    assert isinstance(check(src, [(0, parse_constraint("x0 < 1"))], Incl(((0, frag([(1, 1)])),))), Error)
    assert check(src, [(0, parse_constraint("x0 < 2"))], Incl(((0, frag([(1, 1)])),))) == Value()


def test_equalities():
    src = [(0, parse_constraint("x0 + x1 = 2")), (1, parse_constraint("x0 <= 0"))]
    # an equality target entailed by an equality source, in one item
    assert check(src, [(5, parse_constraint("2*x0 + 2*x1 = 4"))], Incl(((5, frag([(2, 0)])),))) == Value()
    # or by two items, one per direction
    src2 = src + [(2, parse_constraint("-1*x0 <= 0"))]
    ok = Incl(((5, frag([(1, 0), (1, 2)])), (5, frag([(-1, 0), (1, 1)]))))
    assert check(src2, [(5, parse_constraint("x1 = 2"))], ok) == Value()
    # both items proving the same direction do not make an equality
    same = Incl(((5, frag([(-1, 0), (1, 1)])), (5, frag([(-1, 0), (1, 1)]))))
    assert "equality target" in check(src2, [(5, parse_constraint("x1 = 2"))], same).reason
    # negative multiples are fine on equalities only
    assert check(src, [(0, parse_constraint("-1*x0 + -1*x1 <= -2"))], Incl(((0, frag([(-1, 0)])),))) == Value()


def test_emptiness():
    src = [(0, parse_constraint("x0 <= 0")), (1, parse_constraint("x0 > 0"))]
    assert check(src, [], Empty(frag([(1, 0), (1, 1)]))) == Value()
    assert check(src, [(0, parse_constraint("x5 = 3"))], Empty(frag([(1, 0), (1, 1)]))) == Value()
    non_strict = [(0, parse_constraint("x0 <= 0")), (1, parse_constraint("x0 >= 0"))]
    assert isinstance(check(non_strict, [], Empty(frag([(1, 0), (1, 1)]))), Error)


def test_duplicate_ids_rejected():
    src = [(0, parse_constraint("x0 <= 0")), (0, parse_constraint("x0 <= 1"))]
    assert "duplicate" in check(src, [], Incl(())).reason


def test_empty_target_needs_no_items():
    assert check(SRC, [], Incl(())) == Value()


@given(feasible_systems(nvars=3, max_size=5), systems(nvars=3, max_size=4))
def test_domain_certificates_verify(s1, s2):
    p1 = D.from_constraints(3, s1)
    p2 = D.from_constraints(3, s2)
    for res in (p1, p2, D.meet(p1.value, p2.value), D.join(p1.value, p2.value), D.project(p1.value, [1])):
        for ob in res.certs:
            assert check(ob.lhs, ob.rhs, ob.cert) == Value(), ob.what
