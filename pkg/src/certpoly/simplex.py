"""Feasibility-only simplex over delta values, with Farkas unsat witnesses.

Every constraint ``a.x <cmp> b`` is split into a slack ``s = key`` (``key`` the
primitive, positively-led multiple of ``a``) and a bound on ``s``.  Constraints
sharing a linear term share the slack; a single-variable term bounds the
variable itself.  Only bounded variables can show up in a conflict, so every
conflict maps back to source constraints through the bound labels.

Strict bounds use delta values: ``s < b`` is the bound ``s <= b - d`` for a
positive infinitesimal ``d`` which is instantiated when a point is returned.

Pivoting follows Bland's rule (smallest index first), original variables being
numbered below slacks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from certpoly.constraint import Cmp, Constraint
from certpoly.numeric import DZERO, ONE, ZERO, DeltaValue, Q, SparseVector, vec_gcd_normalize

LOWER = "lower"
UPPER = "upper"


class Bound(NamedTuple):
    value: DeltaValue
    label: Hashable
    # the labelled constraint's term is ``factor`` times the slack's term
    factor: object


@dataclass(frozen=True)
class Feasible:
    point: SparseVector


@dataclass(frozen=True)
class Infeasible:
    """``sum coef * constraint[label]`` is a trivially false constraint."""

    witness: Tuple[Tuple[Hashable, object], ...]


SimplexOutcome = Union[Feasible, Infeasible]


def term_key(term: SparseVector) -> Tuple[SparseVector, object]:
    """``(key, f)`` with ``term == f*key`` and ``key`` primitive with positive lead."""
    key, g = vec_gcd_normalize(term)
    if key.lead()[1] < 0:
        return -key, -g
    return key, g


class SimplexProblem:
    def __init__(self, first_slack: int):
        self.rows: Dict[int, Dict[int, object]] = {}
        self.lower: Dict[int, Bound] = {}
        self.upper: Dict[int, Bound] = {}
        self.value: Dict[int, DeltaValue] = {}
        self.slack_term: Dict[int, SparseVector] = {}
        self.term_slack: Dict[SparseVector, int] = {}
        self.originals: set = set()
        self.next_var = first_slack
        self.conflicts: List[Hashable] = []  # labels of trivially false inputs
        self.pivots = 0

    # -- construction ----------------------------------------------------

    def _original(self, v: int) -> None:
        if v not in self.originals:
            if v >= self.next_var:
                raise ValueError(f"variable {v} collides with slack numbering")
            self.originals.add(v)
            self.value.setdefault(v, DZERO)

    def slack_for(self, term: SparseVector) -> Tuple[int, object]:
        """The variable standing for ``term``, and ``f`` with ``term == f*var``."""
        key, f = term_key(term)
        var = self.term_slack.get(key)
        if var is not None:
            return var, f
        items = key.items()
        if len(items) == 1 and items[0][1] == 1:
            var = items[0][0]
            self._original(var)
        else:
            for v, _ in items:
                self._original(v)
            var = self.next_var
            self.next_var += 1
            row: Dict[int, object] = {}
            for v, a in items:
                if v in self.rows:
                    for w, b in self.rows[v].items():
                        c = row.get(w, ZERO) + a * b
                        if c == 0:
                            row.pop(w, None)
                        else:
                            row[w] = c
                else:
                    c = row.get(v, ZERO) + a
                    if c == 0:
                        row.pop(v, None)
                    else:
                        row[v] = c
            self.rows[var] = row
            self.value[var] = self._row_value(row)
        self.term_slack[key] = var
        self.slack_term[var] = key
        return var, f

    def bounds_for(self, label: Hashable, c: Constraint) -> List[Tuple[int, str, Bound]]:
        """The slack bounds expressing ``c``; creates the slack if needed."""
        var, f = self.slack_for(c.term)
        b = c.bound / f
        if c.cmp is Cmp.EQ:
            dv = DeltaValue(b, ZERO)
            return [(var, UPPER, Bound(dv, label, f)), (var, LOWER, Bound(dv, label, f))]
        strict = c.cmp is Cmp.LT
        if f > 0:
            return [(var, UPPER, Bound(DeltaValue(b, -ONE if strict else ZERO), label, f))]
        return [(var, LOWER, Bound(DeltaValue(b, ONE if strict else ZERO), label, f))]

    def add_constraint(self, label: Hashable, c: Constraint) -> None:
        """Install ``c`` unless a tighter bound is already present."""
        if not c.term:
            if c.trivially_false():
                self.conflicts.append(label)
            return
        for var, side, bnd in self.bounds_for(label, c):
            cur = self.get_bound(var, side)
            if cur is None or (bnd.value < cur.value if side == UPPER else bnd.value > cur.value):
                self.set_bound(var, side, bnd)

    def get_bound(self, var: int, side: str) -> Optional[Bound]:
        return (self.upper if side == UPPER else self.lower).get(var)

    def set_bound(self, var: int, side: str, bound: Optional[Bound]) -> None:
        """Install or retract (``None``) a bound, keeping the invariant.

        A non-basic variable whose value leaves its new bounds is pivoted into
        the basis when some row admits it, otherwise moved onto the bound.
        """
        table = self.upper if side == UPPER else self.lower
        if bound is None:
            table.pop(var, None)
            return
        table[var] = bound
        if var in self.rows:
            return
        val = self.value[var]
        violated = val > bound.value if side == UPPER else val < bound.value
        if not violated:
            return
        for r in sorted(self.rows):
            row = self.rows[r]
            if var in row and self._within(r, self.value[r]):
                self._pivot(r, var)
                return
        self._update(var, bound.value)

    def forget(self, var: int) -> bool:
        """Drop an unbounded slack nobody refers to any more.

        A non-basic slack is first pivoted into the basis through a row whose
        value respects its bounds.  Returns False (slack kept) when no such
        row exists.
        """
        if var in self.lower or var in self.upper or var in self.originals or var not in self.slack_term:
            return False
        if var not in self.rows:
            for r in sorted(self.rows):
                if var in self.rows[r] and self._within(r, self.value[r]):
                    self._pivot(r, var)
                    break
            else:
                if any(var in row for row in self.rows.values()):
                    return False
        self.rows.pop(var, None)
        self.value.pop(var, None)
        del self.term_slack[self.slack_term.pop(var)]
        return True

    # -- core --------------------------------------------------------------

    def _row_value(self, row: Dict[int, object]) -> DeltaValue:
        real = ZERO
        delta = ZERO
        for v, a in row.items():
            x = self.value[v]
            real += a * x.real
            delta += a * x.delta
        return DeltaValue(real, delta)

    def _within(self, v: int, x: DeltaValue) -> bool:
        lo = self.lower.get(v)
        if lo is not None and x < lo.value:
            return False
        up = self.upper.get(v)
        return up is None or x <= up.value

    def _update(self, n: int, target: DeltaValue) -> None:
        """Move non-basic ``n`` to ``target``, adjusting basic values."""
        value = self.value
        cur = value[n]
        tr = target.real - cur.real
        td = target.delta - cur.delta
        value[n] = target
        if not tr and not td:
            return
        for r, row in self.rows.items():
            a = row.get(n)
            if a is not None:
                x = value[r]
                value[r] = DeltaValue(x.real + a * tr, x.delta + a * td)

    def _pivot(self, b: int, n: int) -> None:
        """Exchange basic ``b`` and non-basic ``n``."""
        self.pivots += 1
        row = self.rows.pop(b)
        a = row.pop(n)
        inv = 1 / a
        new_row = {v: -c * inv for v, c in row.items()}
        new_row[b] = inv
        entries = list(new_row.items())
        for other in self.rows.values():
            c = other.pop(n, None)
            if c is None:
                continue
            for v, d in entries:
                old = other.get(v)
                if old is None:
                    other[v] = c * d
                else:
                    e = old + c * d
                    if e:
                        other[v] = e
                    else:
                        del other[v]
        self.rows[n] = new_row

    def _bound_conflict(self) -> Optional[Infeasible]:
        for v, up in self.upper.items():
            lo = self.lower.get(v)
            if lo is not None and lo.value > up.value:
                return self._witness([(UPPER, up, ONE), (LOWER, lo, ONE)])
        return None

    def _witness(self, parts: Iterable[Tuple[str, Bound, object]]) -> Infeasible:
        """Map weighted bound constraints back to their labelled sources.

        ``(UPPER, bnd, m)`` stands for ``m*(s <= u)``, ``(LOWER, bnd, m)`` for
        ``m*(-s <= -l)``; the source constraint is ``factor*s <cmp> ...``.
        """
        acc: Dict[Hashable, object] = {}
        order: List[Hashable] = []
        for side, bnd, m in parts:
            coef = m / bnd.factor if side == UPPER else -m / bnd.factor
            if bnd.label not in acc:
                order.append(bnd.label)
                acc[bnd.label] = coef
            else:
                acc[bnd.label] += coef
        pos = [c for c in acc.values() if c > 0]
        scale = 1 / min(pos) if pos else ONE
        return Infeasible(tuple((lab, acc[lab] * scale) for lab in order if acc[lab] != 0))

    def solve(self) -> SimplexOutcome:
        if self.conflicts:
            return Infeasible(((self.conflicts[0], ONE),))
        clash = self._bound_conflict()
        if clash is not None:
            return clash
        # a bound installed and later retracted while the opposite side
        # clashed can leave a non-basic variable outside its bounds
        for v, x in list(self.value.items()):
            if v not in self.rows and not self._within(v, x):
                lo = self.lower.get(v)
                self._update(v, lo.value if lo is not None and x < lo.value else self.upper[v].value)
        while True:
            b = None
            for r in sorted(self.rows):
                if not self._within(r, self.value[r]):
                    b = r
                    break
            if b is None:
                return Feasible(self._point())
            row = self.rows[b]
            val = self.value[b]
            lo = self.lower.get(b)
            if lo is not None and val < lo.value:
                n = None
                for v in sorted(row):
                    a = row[v]
                    if a > 0:
                        up = self.upper.get(v)
                        if up is None or self.value[v] < up.value:
                            n = v
                            break
                    else:
                        lw = self.lower.get(v)
                        if lw is None or self.value[v] > lw.value:
                            n = v
                            break
                if n is None:
                    parts = [(LOWER, lo, ONE)]
                    for v, a in row.items():
                        parts.append((UPPER, self.upper[v], a) if a > 0 else (LOWER, self.lower[v], -a))
                    return self._witness(parts)
                target = lo.value
            else:
                up = self.upper[b]
                n = None
                for v in sorted(row):
                    a = row[v]
                    if a < 0:
                        u2 = self.upper.get(v)
                        if u2 is None or self.value[v] < u2.value:
                            n = v
                            break
                    else:
                        lw = self.lower.get(v)
                        if lw is None or self.value[v] > lw.value:
                            n = v
                            break
                if n is None:
                    parts = [(UPPER, up, ONE)]
                    for v, a in row.items():
                        parts.append((LOWER, self.lower[v], a) if a > 0 else (UPPER, self.upper[v], -a))
                    return self._witness(parts)
                target = up.value
            # moving n by theta brings b exactly onto its violated bound
            theta = (target - val) / row[n]
            self._update(n, self.value[n] + theta)
            self._pivot(b, n)

    def _delta(self):
        """A positive rational small enough for every bound to hold."""
        d = ONE
        for v, x in self.value.items():
            lo = self.lower.get(v)
            if lo is not None:
                d = _shrink(d, lo.value, x)
            up = self.upper.get(v)
            if up is not None:
                d = _shrink(d, x, up.value)
        return d / 2

    def _point(self) -> SparseVector:
        d = self._delta()
        return SparseVector.of(
            (v, self.value[v].instantiate(d)) for v in sorted(self.originals)
        )

    # -- diagnostics ---------------------------------------------------------

    def check_invariant(self) -> bool:
        """The candidate point satisfies every row and non-basic bound."""
        for r, row in self.rows.items():
            if self._row_value(row) != self.value[r]:
                return False
        for v in self.value:
            if v not in self.rows and not self._within(v, self.value[v]):
                return False
        return True


def _shrink(d, small: DeltaValue, big: DeltaValue):
    """Largest ``d' <= d`` keeping ``small <= big`` after instantiation."""
    gap = big.real - small.real
    slope = small.delta - big.delta
    if slope > 0 and gap > 0:
        lim = gap / slope
        if lim < d:
            return lim
    return d


def build(constraints: Iterable[Tuple[Hashable, Constraint]], terms: Iterable[SparseVector] = ()) -> SimplexProblem:
    """A problem holding ``constraints`` (labels must be distinct) plus unbounded
    slacks for ``terms`` that later queries will bound."""
    constraints = list(constraints)
    terms = list(terms)
    top = -1
    for _, c in constraints:
        for v in c.term.keys():
            top = max(top, v)
    for t in terms:
        for v in t.keys():
            top = max(top, v)
    p = SimplexProblem(top + 1)
    for label, c in constraints:
        p.add_constraint(label, c)
    for t in terms:
        if t:
            p.slack_for(t)
    return p
