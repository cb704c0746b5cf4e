import pytest
from hypothesis import assume, given, strategies as st

from certpoly.constraint import (
    Cmp,
    Constraint,
    InvalidCombination,
    ParseError,
    canonicalize,
    combine,
    complement,
    lin_comb,
    parse_constraint,
    parse_linexpr,
    satisfies,
    split_eq,
    substitute,
    syntactic_incl,
)
from certpoly.numeric import Q, SparseVector
from strategies import constraints


def c(text):
    return parse_constraint(text)


def test_parse_canonicalizes():
    assert c("2*x0 + 4*x1 <= 6") == Constraint.of({0: 1, 1: 2}, Cmp.LE, 3)
    assert c("x0 >= 1") == Constraint.of({0: -1}, Cmp.LE, -1)
    assert c("-2*x1 = 4") == Constraint.of({1: 1}, Cmp.EQ, -2)
    assert c("x2 > 0").cmp is Cmp.LT
    assert str(c("3*x0 + -3*x1 < 1")) == "1*x0 + -1*x1 < 1/3"


@pytest.mark.parametrize("bad", ["x0 <= ", "x0 <= 1 <= 2", "x0 ** 2 <= 1", "", "2* <= 3"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_constraint(bad)


def test_parse_linexpr_collects_terms():
    term, const = parse_linexpr("2*x0 + -1*x1 + x0 + 3 - 1")
    assert term == SparseVector.of({0: 3, 1: -1}) and const == 2


@given(constraints(canonical=False))
def test_canonicalize(raw):
    canon, g = canonicalize(raw)
    assert canonicalize(canon) == (canon, 1)
    assert canon.term.scale(g) == raw.term
    assert canon.bound * g == raw.bound
    if raw.cmp is Cmp.EQ:
        assert canon.term.lead()[1] > 0
    else:
        assert g > 0


@given(constraints(canonical=False))
def test_text_roundtrip(x):
    canon = canonicalize(x)[0]
    assert parse_constraint(str(canon)) == canon


def test_lin_comb_kinds():
    a, b = c("x0 <= 1"), c("x1 < 2")
    e = c("x0 + x1 = 0")
    assert lin_comb([(1, a), (2, b)]).cmp is Cmp.LT
    assert lin_comb([(1, a), (-3, e)]).cmp is Cmp.LE
    assert lin_comb([(-3, e)]).cmp is Cmp.EQ
    with pytest.raises(InvalidCombination):
        lin_comb([(-1, a)])
    # the projection-example pair: 1*(y <= 1) + 2*(x combination) eliminating a variable
    out = combine(1, c("2*x0 + 1*x1 <= 2"), 2, c("-1*x0 + -1*x1 <= 1"))
    assert out == c("-1*x1 <= 4")


@given(constraints(), st.dictionaries(st.integers(0, 2), st.integers(-4, 4), min_size=3, max_size=3))
def test_complement_partitions_space(x, pt):
    assume(x.cmp is not Cmp.EQ)
    assert satisfies(x, pt) != satisfies(complement(x), pt)


def test_split_eq():
    lo, hi = split_eq(c("x0 + x1 = 2"))
    assert lo == c("x0 + x1 <= 2") and hi == c("-1*x0 + -1*x1 <= -2")
    with pytest.raises(ValueError):
        complement(c("x0 = 1"))


def test_syntactic_incl():
    assert syntactic_incl(c("x0 <= 1"), parse_constraint("2*x0 <= 3", canonical=False)) == 2
    assert syntactic_incl(c("x0 <= 1"), c("x0 <= 0")) is None
    # strict targets: strict source or strictly smaller bound
    assert syntactic_incl(c("x0 < 1"), c("x0 < 1")) == 1
    assert syntactic_incl(c("x0 <= 1"), c("x0 < 1")) is None
    assert syntactic_incl(c("x0 <= 1"), c("x0 < 2")) == 1
    # equalities may be used in either direction
    assert syntactic_incl(c("x0 = 1"), c("-1*x0 <= -1")) == -1
    assert syntactic_incl(c("x0 <= 1"), c("-1*x0 <= 5")) is None
    assert syntactic_incl(c("0 <= -1"), c("x0 <= 0")) is None  # different terms


@given(constraints(), st.lists(constraints(cmp=st.just(Cmp.EQ)), max_size=2), st.dictionaries(st.integers(0, 2), st.integers(-3, 3), min_size=3, max_size=3))
def test_substitute_is_a_combination(x, eqs, pt):
    defs = []
    for e in eqs:
        # define the largest variable, and keep the definitions independent
        v = e.term.keys()[-1]
        if any(v in d.term for _, d in defs):
            continue
        d = e
        for w, f in defs:
            if w in d.term:
                d = canonicalize(lin_comb([(1, d), (-d.term[w] / f.term[w], f)]))[0]
        if not d.term or d.term.keys()[-1] in [w for w, _ in defs]:
            continue
        defs.append((d.term.keys()[-1], d))
    res, kc, coefs = substitute(x, defs)
    raw = lin_comb([(kc, x)] + [(k, defs[j][1]) for j, k in coefs])
    assert canonicalize(raw)[0] == res
    for v, _ in defs:
        assert v not in res.term
