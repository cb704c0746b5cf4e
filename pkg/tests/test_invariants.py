from certpoly import domain as D
from certpoly.constraint import parse_constraint
from certpoly.domain import EmptyProof, Polyhedron
from certpoly.invariants import violations
from certpoly.numeric import SparseVector


def c(t):
    return parse_constraint(t)


def test_minimized_values_pass():
    p = D.from_constraints(3, [c("x0 + x1 = 1"), c("x2 <= 4"), c("x2 >= x0")]).value
    assert violations(p) == []


def test_each_broken_invariant_is_reported():
    assert violations(Polyhedron(1, (), ((0, c("x0 <= 1")), (1, c("x0 <= 2"))), 2)) == ["redundant: 1*x0 <= 2"]
    assert "implicit equality" in violations(Polyhedron(1, (), ((0, c("x0 <= 0")), (1, c("-1*x0 <= 0"))), 2))[0]
    raw = parse_constraint("2*x0 <= 2", canonical=False)
    assert "not canonical" in violations(Polyhedron(1, (), ((0, raw),), 1))[0]
    # an equality must define its largest variable, which may not occur elsewhere
    assert "does not define" in violations(Polyhedron(2, ((0, 0, c("x0 + x1 = 0")),), (), 1))[0]
    assert "occurs in inequality" in violations(Polyhedron(2, ((1, 0, c("x0 + x1 = 0")),), ((1, c("x1 <= 0")),), 2))[0]
    assert "not represented as bottom" in violations(Polyhedron(1, (), ((0, c("x0 < 0")), (1, c("x0 > 0"))), 2))[0]
    bogus = EmptyProof(((0, c("x0 <= 0")),), SparseVector.unit(0))
    assert "emptiness witness" in violations(Polyhedron(1, empty=bogus))[0]
