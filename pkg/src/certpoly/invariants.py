"""Representation invariants of domain values, checked from the outside.

Used by tests and harnesses.  Everything is re-derived from the published
fields of :class:`~certpoly.domain.Polyhedron`; the only shared machinery is
the simplex, driven through its public bound interface.
"""

from __future__ import annotations

from typing import List

from certpoly.certificate import Empty
from certpoly.checker import Value, check
from certpoly.constraint import Cmp, Constraint, canonicalize, complement
from certpoly.simplex import Infeasible, build


def _probe(problem, label, c: Constraint) -> bool:
    """Is the problem plus ``c`` feasible?  The problem is left unchanged."""
    ((var, side, bnd),) = problem.bounds_for(label, c)
    cur = problem.get_bound(var, side)
    if cur is not None and (cur.value <= bnd.value if side == "upper" else cur.value >= bnd.value):
        return not isinstance(problem.solve(), Infeasible)
    problem.set_bound(var, side, bnd)
    out = problem.solve()
    problem.set_bound(var, side, cur)
    return not isinstance(out, Infeasible)


def violations(p) -> List[str]:
    """Human-readable list of broken invariants (empty when all hold)."""
    out: List[str] = []
    if p.is_bot:
        src = p.empty.source
        if not isinstance(check(src, src, Empty(p.empty.witness)), Value):
            out.append("bottom without a valid emptiness witness")
        return out
    defined = []
    for var, _, c in p.eqs:
        if c.cmp is not Cmp.EQ:
            out.append(f"equality slot holds {c}")
        if canonicalize(c)[0] != c:
            out.append(f"not canonical: {c}")
        if not c.term or c.term.keys()[-1] != var:
            out.append(f"{c} does not define x{var}")
        defined.append(var)
    if len(set(defined)) != len(defined):
        out.append("a variable is defined twice")
    for var, _, c in p.eqs:
        for w in defined:
            if w != var and w in c.term:
                out.append(f"defined x{w} occurs in equality {c}")
    for _, c in p.ineqs:
        if c.cmp is Cmp.EQ:
            out.append(f"equality {c} among the inequalities")
        if canonicalize(c)[0] != c:
            out.append(f"not canonical: {c}")
        if not c.term:
            out.append(f"trivial constraint {c}")
        for w in defined:
            if w in c.term:
                out.append(f"defined x{w} occurs in inequality {c}")
    if out:
        return out
    problem = build([(("eq", i), c) for i, (_, _, c) in enumerate(p.eqs)])
    if isinstance(problem.solve(), Infeasible):
        return ["equalities alone are inconsistent"]
    full = build([(("eq", i), c) for i, (_, _, c) in enumerate(p.eqs)] + [(cid, c) for cid, c in p.ineqs])
    if isinstance(full.solve(), Infeasible):
        return ["empty polyhedron not represented as bottom"]
    for cid, c in p.ineqs:
        if c.cmp is Cmp.LE and not _probe(full, "probe", Constraint(c.term, Cmp.LT, c.bound)):
            out.append(f"implicit equality: {c}")
    for i, (cid, c) in enumerate(p.ineqs):
        rest = build(
            [(("eq", k), e) for k, (_, _, e) in enumerate(p.eqs)]
            + [(oid, o) for j, (oid, o) in enumerate(p.ineqs) if j != i],
            [c.term],
        )
        if not _probe(rest, "probe", complement(c)):
            out.append(f"redundant: {c}")
    return out
