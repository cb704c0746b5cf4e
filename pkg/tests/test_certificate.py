import pytest
from hypothesis import given, strategies as st

from certpoly.certificate import (
    Empty,
    Incl,
    TaggedConstraint,
    format_cert,
    format_flat,
    frag,
    frag_pairs,
    frag_scale_concat,
    init_fragments,
    parse_cert,
    parse_flat,
    recombine,
    tagged_combine,
    tagged_halves,
)
from certpoly.constraint import Cmp, ParseError, canonicalize, parse_constraint
from certpoly.numeric import Q, SparseVector
from strategies import constraints, rationals


def c(text):
    return parse_constraint(text)


def test_fragments_merge_by_id():
    f = frag([(1, 0), (2, 3), (Q(1, 2), 0)])
    assert frag_pairs(f) == [(Q(3, 2), 0), (2, 3)]
    g = frag_scale_concat(2, frag([(1, 0)]), 3, frag([(1, 0), (1, 1)]))
    assert frag_pairs(g) == [(5, 0), (3, 1)]


def test_recombine():
    src = [(0, c("x1 <= 1")), (1, c("2*x0 + x1 <= 2")), (2, c("-1*x0 + -1*x1 <= 1"))]
    out = recombine(frag([(1, 1), (2, 2)]), src)
    assert canonicalize(out)[0] == c("-1*x1 <= 4")


@st.composite
def tagged_system(draw):
    cs = draw(st.lists(constraints(nvars=3), min_size=2, max_size=5))
    return list(enumerate(cs))


@given(tagged_system(), st.data())
def test_tagged_combine_keeps_fragments_faithful(src, data):
    tagged = init_fragments(src)
    t = tagged[0]
    for other in tagged[1:]:
        k1 = data.draw(st.integers(0, 3) if t.cons.cmp is not Cmp.EQ else st.integers(-3, 3))
        k2 = data.draw(st.integers(0, 3) if other.cons.cmp is not Cmp.EQ else st.integers(-3, 3))
        t = tagged_combine([(k1, t), (k2, other)])
        # the fragment recombines to the constraint, up to a positive factor
        raw = recombine(t.frag, src)
        if raw.term or t.cons.term:
            canon, g = canonicalize(raw) if raw.term else (raw, 1)
            assert canon.term == t.cons.term
            assert canon.bound == t.cons.bound
        if t.cons.cmp is Cmp.EQ:
            ge = recombine(t.frag_ge, src)
            assert ge.term == -t.cons.term and ge.bound == -t.cons.bound


def test_tagged_halves():
    src = [(4, c("x0 + x1 = 2"))]
    (t,) = init_fragments(src)
    le, ge = tagged_halves(t)
    assert le.cons.cmp is Cmp.LE and ge.cons.cmp is Cmp.LE
    assert recombine(le.frag, src).term == le.cons.term
    assert recombine(ge.frag, src).term == ge.cons.term
    assert t.directed(-2) == SparseVector.of({4: 2}).scale(-1)


def test_cert_text_roundtrip():
    cert = Incl(((0, frag([(1, 0), (Q(2, 3), 1)])), (1, frag([(-1, 2)])), (1, frag([(1, 2)]))))
    text = format_cert(cert)
    assert text == "incl { 0: [(1, 0), (2/3, 1)]; 1: [(-1, 2)]; 1: [(1, 2)] }"
    assert parse_cert(text) == cert
    e = Empty(frag([(1, 0), (1, 5)]))
    assert parse_cert(format_cert(e)) == e
    assert parse_cert("incl { }") == Incl(())


@pytest.mark.parametrize("bad", ["incl 0: [(1, 0)]", "empty (1, 0)", "incl { 0 [(1, 0)] }", "proof {}", "empty [(x, 0)]"])
def test_cert_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_cert(bad)


@given(st.lists(constraints(nvars=4, canonical=False), max_size=5))
def test_flat_roundtrip(cs):
    flat = list(enumerate(cs))
    back = parse_flat(format_flat(flat))
    # the flat form is exact (not re-canonicalized)
    assert back == flat


def test_flat_parse_errors():
    with pytest.raises(ParseError, match="line 2"):
        parse_flat("0: x0 <= 1\nnonsense\n")
