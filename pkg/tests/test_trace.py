import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from certpoly import trace as T
from certpoly.constraint import Cmp, parse_constraint
from certpoly.numeric import Q, SparseVector
from strategies import constraints

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

EXAMPLE = """\
# the projection example
P := poly 2 { 1*x1 <= 1; 2*x0 + 1*x1 <= 2; -1*x0 + -1*x1 <= 1 }
Q := project P x0
"""


def test_parse_example():
    ops = T.parse(EXAMPLE)
    assert ops[0] == T.Define("P", 2, tuple(parse_constraint(t) for t in ("x1 <= 1", "2*x0 + x1 <= 2", "-1*x0 + -1*x1 <= 1")))
    assert ops[1] == T.Project("Q", "P", (0,))


def test_parse_all_forms():
    text = """
    A := poly 2 { x0 >= 0; x1 < 3 }   # trailing comment
    B := poly 2 { }
    C := meet A B
    D := join A C
    E := widen C D
    F := assign E x0 := 2*x1 + 1; x1 := 0
    incl A D true
    incl D A false
    incl A B
    assert_eq C A
    """
    ops = T.parse(text)
    assert [type(op).__name__ for op in ops] == ["Define", "Define", "Meet", "Join", "Widen", "Assign", "Inclusion", "Inclusion", "Inclusion", "AssertEq"]
    assert ops[1].constraints == ()
    assert ops[5].assignments == ((0, SparseVector.of({1: 2}), 1), (1, SparseVector.of({}), 0))
    assert [op.expected for op in ops[6:9]] == [True, False, None]


def test_empty_input():
    assert T.parse("") == [] and T.parse("# nothing\n\n") == []


@pytest.mark.parametrize(
    "text, line, msg",
    [
        ("Q := join P P\n", 1, "unknown name"),
        ("P := poly 1 { x0 <= 1 }\n\nQ := project P x3\n", 3, "out of range"),
        ("P := poly 1 { x2 <= 1 }\n", 1, "out of range"),
        ("P := poly 1 { x0 <= }\n", 1, "empty expression"),
        ("P := poly 1 { }\nP := poly 1 { }\n", 2, "already defined"),
        ("P := frob 1\n", 1, "unknown operation"),
        ("P := poly 1 { }\nincl P P maybe\n", 2, "incl"),
        ("P := poly 1 { }\nQ := assign P x0 = 1\n", 2, ":="),
        ("hello\n", 1, "cannot parse"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, msg):
    with pytest.raises(T.TraceError, match=msg) as exc:
        T.parse(text)
    assert exc.value.line == line and str(exc.value).startswith(f"line {line}:")


names = st.sampled_from(["A", "B", "P0", "q_1"])


@st.composite
def ops(draw):
    kind = draw(st.sampled_from(["def", "meet", "join", "widen", "project", "assign", "incl", "eq"]))
    a, b, d = draw(names), draw(names), draw(st.sampled_from(["R", "Out_2"]))
    if kind == "def":
        return T.Define(d, 3, tuple(draw(st.lists(constraints(nvars=3), max_size=3))))
    if kind in ("meet", "join", "widen"):
        return {"meet": T.Meet, "join": T.Join, "widen": T.Widen}[kind](d, a, b)
    if kind == "project":
        return T.Project(d, a, tuple(draw(st.lists(st.integers(0, 2), min_size=1, max_size=3))))
    if kind == "assign":
        asg = draw(
            st.lists(
                st.tuples(
                    st.integers(0, 2),
                    st.dictionaries(st.integers(0, 2), st.integers(-5, 5)).map(SparseVector.of),
                    st.builds(Q, st.integers(-9, 9), st.integers(1, 4)),
                ),
                min_size=1,
                max_size=3,
            )
        )
        return T.Assign(d, a, tuple(asg))
    if kind == "incl":
        return T.Inclusion(a, b, draw(st.sampled_from([None, True, False])))
    return T.AssertEq(a, b)


@given(ops())
def test_print_parse_identity(op):
    # every name an op refers to is defined first (over 3 variables)
    prelude = "".join(f"{n} := poly 3 {{ }}\n" for n in ("A", "B", "P0", "q_1"))
    parsed = T.parse(prelude + T.format_op(op) + "\n")
    assert parsed[-1] == op


def test_replay_projection_example():
    report = T.replay(T.parse(EXAMPLE), T.ReplayOptions(check_certs=True, oracle=True))
    assert str(report.values["Q"]) == "{ 1*x1 <= 1; -1*x1 <= 4 }"
    assert report.ok
    rec = report.records[1]
    assert (rec.op, rec.size, rec.eqs, rec.ineqs, rec.oracle) == ("project", 3, 0, 2, "ok")
    assert rec.certs == rec.certs_ok == 1


def test_replay_aborts_on_failed_assertions():
    text = "A := poly 1 { x0 <= 1 }\nB := poly 1 { x0 <= 2 }\nincl A B true\nincl B A true\n"
    with pytest.raises(T.ReplayAbort, match="op 4") as exc:
        T.replay(T.parse(text))
    assert exc.value.index == 3
    with pytest.raises(T.ReplayAbort, match="differ"):
        T.replay(T.parse("A := poly 1 { x0 <= 1 }\nB := poly 1 { x0 <= 2 }\nassert_eq A B\n"))
    T.replay(T.parse("A := poly 1 { x0 <= 1 }\nB := poly 1 { 2*x0 <= 2; x0 <= 7 }\nassert_eq A B\n"))


def test_oracle_skipped_beyond_four_variables():
    report = T.replay(T.parse("A := poly 5 { x4 <= 1 }\nB := project A x4\n"), T.ReplayOptions(oracle=True))
    assert [r.oracle for r in report.records] == ["skipped", "skipped"]
    assert len(report.notices) == 1 and report.ok


def test_bucket_labels_follow_the_table():
    expect = {0: "0-1", 1: "0-1", 2: "2-5", 5: "2-5", 6: "6-10", 10: "6-10", 11: "11-15", 15: "11-15",
              16: "16-20", 20: "16-20", 21: "21-25", 25: "21-25", 26: "26-30", 30: "26-30", 31: "31+", 400: "31+"}
    assert {k: T.bucket_label(k) for k in expect} == expect
    assert [T.bucket_label(lo) for lo, _ in T.BUCKETS] == ["0-1", "2-5", "6-10", "11-15", "16-20", "21-25", "26-30", "31+"]


def test_report_excludes_trivial_problems_from_totals():
    text = "A := poly 2 { x0 <= 1 }\nB := poly 2 { x0 + x1 <= 1; x0 - x1 <= 1; x0 >= -3 }\nC := meet A B\nD := project A x0\n"
    report = T.replay(T.parse(text))
    trivial = [r for r in report.records if r.trivial]
    assert [r.op for r in trivial] == ["poly", "project"]
    totals = report.totals()
    assert totals["poly"]["count"] == 1 and "project" not in totals
    buckets = report.buckets()
    assert buckets["project"]["0-1"]["count"] == 1
    assert buckets["meet"]["2-5"]["count"] == 1
    data = json.loads(report.to_json())
    assert set(data) == {"summary", "totals", "buckets", "records", "notices"}
    assert data["summary"]["trivial"] == 2
    assert "0-1" in report.format_table()


def test_gen_is_deterministic():
    for profile in T.PROFILES:
        assert T.gen(3, profile) == T.gen(3, profile)
    assert T.gen(1, "box") != T.gen(2, "box")
    with pytest.raises(ValueError):
        T.gen(1, "spiral")


def test_box_profile_is_boxes():
    ops = T.parse(T.gen(1, "box"))
    for op in ops:
        if isinstance(op, T.Define):
            assert all(len(c.term) == 1 for c in op.constraints)
    assert any(isinstance(op, T.Join) for op in ops) or any(isinstance(op, T.Meet) for op in ops)


@pytest.mark.parametrize("seed", [1, 2, 5, 8])
def test_loop_chain_reaches_a_stable_invariant(seed):
    ops = T.parse(T.gen(seed, "loop-chain"))
    checks = [op for op in ops if isinstance(op, T.Inclusion)]
    assert checks[-1].expected is True and all(op.expected is False for op in checks[:-1])
    assert any(isinstance(op, T.Widen) for op in ops) or len(checks) <= 3
    report = T.replay(ops, T.ReplayOptions(check_certs=True))
    assert report.ok


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.trace")), ids=lambda p: p.name)
def test_bundled_corpus_certificates(path):
    report = T.replay(T.parse(path.read_text()), T.ReplayOptions(check_certs=True))
    s = report.summary()
    assert s["certificates"]["checked"] > 0
    assert s["certificates"]["accepted"] == s["certificates"]["checked"]
    assert report.ok
