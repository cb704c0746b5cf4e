"""Brute-force reference implementations for small dimensions.

Nothing here touches the simplex or the domain code.  Everything is dense
Gaussian elimination over the numeric layer plus enumeration:

* feasibility by enumerating the minimal faces (basic solutions) of the
  system, strict inequalities handled by maximizing a common slack ``t``;
* unrefined Fourier-Motzkin projection;
* drop-one redundancy scan;
* vertex enumeration and a facet-enumerating hull for bounded polytopes.

Costs grow combinatorially; intended for at most four variables and about a
dozen constraints.
"""

from __future__ import annotations

from itertools import combinations
from typing import List, Optional, Sequence

from certpoly.constraint import Cmp, Constraint
from certpoly.numeric import ONE, ZERO, Q, SparseVector

Dense = List[object]


def _dense(c: Constraint, n: int) -> Dense:
    row = [ZERO] * n
    for v, a in c.term.items():
        row[v] = a
    return row


def _rref(rows: List[Dense], rhs: Optional[Dense] = None):
    """Row-reduce in place; returns pivot columns (and the reduced rhs)."""
    m = [list(r) + ([rhs[i]] if rhs is not None else []) for i, r in enumerate(rows)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return pivots, m


def rank(rows: List[Dense]) -> int:
    if not rows:
        return 0
    return len(_rref(rows)[0])


def solve_eq(rows: List[Dense], rhs: Dense, n: int) -> Optional[Dense]:
    """A particular solution of ``rows x = rhs`` (free variables zero)."""
    if not rows:
        return [ZERO] * n
    pivots, m = _rref(rows, rhs)
    for i in range(len(pivots), len(m)):
        if m[i][-1] != 0:
            return None
    x = [ZERO] * n
    for i, col in enumerate(pivots):
        x[col] = m[i][-1]
    return x


def _holds(row: Dense, cmp: Cmp, b, x: Dense) -> bool:
    s = sum((a * xi for a, xi in zip(row, x)), ZERO)
    if cmp is Cmp.LE:
        return s <= b
    if cmp is Cmp.LT:
        return s < b
    return s == b


def basic_points(rows, n: int):
    """Candidate points: one per minimal face of ``{x : rows}``.

    ``rows`` holds ``(dense, cmp, bound)`` with cmp LE or EQ.
    """
    eq = [(r, b) for r, c, b in rows if c is Cmp.EQ]
    le = [(r, b) for r, c, b in rows if c is not Cmp.EQ]
    full = rank([r for r, _, _ in rows])
    base = rank([r for r, _ in eq])
    for idx in combinations(range(len(le)), full - base):
        pick = eq + [le[i] for i in idx]
        if not pick:
            yield [ZERO] * n
            continue
        pivots, m = _rref([r for r, _ in pick], [b for _, b in pick])
        if len(pivots) != full or any(m[i][-1] != 0 for i in range(len(pivots), len(m))):
            continue
        x = [ZERO] * n
        for i, col in enumerate(pivots):
            x[col] = m[i][-1]
        yield x


def point(constraints: Sequence[Constraint], n: int) -> Optional[Dense]:
    """A point satisfying every constraint, or None."""
    strict = any(c.cmp is Cmp.LT for c in constraints)
    if not strict:
        rows = [(_dense(c, n), c.cmp, c.bound) for c in constraints]
        for x in basic_points(rows, n):
            if all(_holds(r, c, b, x) for r, c, b in rows):
                return x
        return None
    # maximize t subject to a.x + t <= b on strict rows, t <= 1; any
    # candidate with t > 0 already settles feasibility
    rows = []
    for c in constraints:
        r = _dense(c, n) + [ONE if c.cmp is Cmp.LT else ZERO]
        rows.append((r, Cmp.EQ if c.cmp is Cmp.EQ else Cmp.LE, c.bound))
    rows.append(([ZERO] * n + [ONE], Cmp.LE, ONE))
    for x in basic_points(rows, n + 1):
        if x[-1] > 0 and all(_holds(r, c, b, x) for r, c, b in rows):
            return x[:-1]
    return None


def feasible(constraints: Sequence[Constraint], n: int) -> bool:
    return point(constraints, n) is not None


def _negate(c: Constraint) -> Constraint:
    return Constraint(-c.term, Cmp.LT if c.cmp is Cmp.LE else Cmp.LE, -c.bound)


def _halves(c: Constraint):
    return Constraint(c.term, Cmp.LE, c.bound), Constraint(-c.term, Cmp.LE, -c.bound)


def entails(constraints: Sequence[Constraint], c: Constraint, n: int) -> bool:
    cs = list(constraints)
    if c.cmp is Cmp.EQ:
        return all(not feasible(cs + [_negate(h)], n) for h in _halves(c))
    return not feasible(cs + [_negate(c)], n)


def included(cs1: Sequence[Constraint], cs2: Sequence[Constraint], n: int) -> bool:
    if not feasible(cs1, n):
        return True
    return all(entails(cs1, c, n) for c in cs2)


def equivalent(cs1: Sequence[Constraint], cs2: Sequence[Constraint], n: int) -> bool:
    return included(cs1, cs2, n) and included(cs2, cs1, n)


def fm_project(constraints: Sequence[Constraint], vars_: Sequence[int]) -> List[Constraint]:
    """Unrefined Fourier-Motzkin: equalities split, every pair kept."""
    cs: List[Constraint] = []
    for c in constraints:
        cs.extend(_halves(c) if c.cmp is Cmp.EQ else (c,))
    for v in vars_:
        zero = [c for c in cs if c.term.get(v) == 0]
        pos = [c for c in cs if c.term.get(v) > 0]
        neg = [c for c in cs if c.term.get(v) < 0]
        out = list(zero)
        for p in pos:
            for m in neg:
                kp, km = -m.term.get(v), p.term.get(v)
                term = p.term.scale(kp) + m.term.scale(km)
                cmp = Cmp.LT if Cmp.LT in (p.cmp, m.cmp) else Cmp.LE
                out.append(Constraint(term, cmp, kp * p.bound + km * m.bound))
        cs = out
    return cs


def drop_one(constraints: Sequence[Constraint], n: int) -> List[Constraint]:
    """Scan in order, dropping each constraint the remaining ones entail."""
    cs = list(constraints)
    i = 0
    while i < len(cs):
        rest = cs[:i] + cs[i + 1:]
        if entails(rest, cs[i], n):
            cs = rest
        else:
            i += 1
    return cs


def redundant_among(constraints: Sequence[Constraint], n: int) -> List[int]:
    """Indices of constraints entailed by all the others."""
    cs = list(constraints)
    return [i for i in range(len(cs)) if entails(cs[:i] + cs[i + 1:], cs[i], n)]


def implicit_equalities(constraints: Sequence[Constraint], n: int) -> List[int]:
    """Indices of non-strict inequalities that hold with equality everywhere."""
    cs = list(constraints)
    if not feasible(cs, n):
        return []
    out = []
    for i, c in enumerate(cs):
        if c.cmp is Cmp.LE and not feasible(cs + [Constraint(c.term, Cmp.LT, c.bound)], n):
            out.append(i)
    return out


def bounded(constraints: Sequence[Constraint], n: int) -> bool:
    """Whether the recession cone is trivial (feasibility not required)."""
    cone = []
    for c in constraints:
        cone.append(Constraint(c.term, Cmp.EQ if c.cmp is Cmp.EQ else Cmp.LE, ZERO))
    for v in range(n):
        for s in (1, -1):
            ray = Constraint(SparseVector.unit(v, -s), Cmp.LE, -ONE)
            if feasible(cone + [ray], n):
                return False
    return True


def vertices(constraints: Sequence[Constraint], n: int) -> List[Dense]:
    """Vertices of a bounded, non-strict polytope."""
    rows = [(_dense(c, n), c.cmp, c.bound) for c in constraints]
    seen = []
    for x in basic_points(rows, n):
        if all(_holds(r, c, b, x) for r, c, b in rows) and x not in seen:
            seen.append(x)
    return seen


def _nullspace(rows: List[Dense], n: int) -> List[Dense]:
    if not rows:
        return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    pivots, m = _rref(rows)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for i, col in enumerate(pivots):
            v[col] = -m[i][f]
        basis.append(v)
    return basis


def _dot(a: Dense, b: Dense):
    return sum((x * y for x, y in zip(a, b)), ZERO)


def _as_constraint(w: Dense, cmp: Cmp, h) -> Constraint:
    return Constraint(SparseVector.of(enumerate(w)), cmp, h)


def hull(points: Sequence[Dense], n: int) -> List[Constraint]:
    """H-representation of the convex hull of finitely many points.

    An empty point set gives the contradiction ``0 <= -1``.
    """
    pts = [[Q(x) for x in p] for p in points]
    if not pts:
        return [Constraint(SparseVector.of({}), Cmp.LE, -ONE)]
    v0 = pts[0]
    diffs = [[a - b for a, b in zip(p, v0)] for p in pts[1:]]
    diffs = [d for d in diffs if any(x != 0 for x in d)]
    out = [_as_constraint(w, Cmp.EQ, _dot(w, v0)) for w in _nullspace(diffs, n)]
    if not diffs:
        return out
    pivots, m = _rref(diffs)
    span = [m[i][:n] for i in range(len(pivots))]
    r = len(span)
    for pick in combinations(range(len(pts)), r):
        base = pts[pick[0]]
        us = [[a - b for a, b in zip(pts[i], base)] for i in pick[1:]]
        # normals inside the span orthogonal to the chosen face directions
        eqs = [[_dot(e, u) for e in span] for u in us]
        ns = _nullspace(eqs, r) if eqs else [[ONE]] if r == 1 else None
        if ns is None or len(ns) != 1:
            continue
        w = [sum((c * e[j] for c, e in zip(ns[0], span)), ZERO) for j in range(n)]
        h = _dot(w, base)
        vals = [_dot(w, p) for p in pts]
        if all(x <= h for x in vals):
            c = _as_constraint(w, Cmp.LE, h)
        elif all(x >= h for x in vals):
            c = _as_constraint([-x for x in w], Cmp.LE, -h)
        else:
            continue
        if c not in out:
            out.append(c)
    return out


def to_dense_point(x: SparseVector, n: int) -> Dense:
    return [x.get(i) for i in range(n)]
