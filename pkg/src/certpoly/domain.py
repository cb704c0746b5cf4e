"""The polyhedra domain with certifying operators.

A non-empty :class:`Polyhedron` keeps

* ``eqs``: equalities in reduced echelon form, each defining one variable (the
  largest index it mentions) that occurs in no other constraint;
* ``ineqs``: inequalities with every defined variable substituted out, free of
  implicit equalities and of redundant constraints;
* canonical (primitive integral) constraints, each with an id unique within
  the polyhedron.

The empty polyhedron is the explicit ``Bot`` arm (``empty`` is set); it keeps
the constraints it was derived from together with a Farkas witness of their
inconsistency, so inclusion of ``Bot`` in anything is still certified.

Operators return a :class:`CertifiedResult` whose obligations are inclusion
claims ``lhs <= rhs`` between flat constraint lists, each with a certificate
that :func:`certpoly.checker.check` accepts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from certpoly.certificate import (
    Cert,
    Empty,
    Incl,
    TaggedConstraint,
    init_fragments,
    recombine,
    tagged_combine,
    tagged_source,
)
from certpoly.constraint import (
    Cmp,
    Constraint,
    canonicalize,
    complement,
    satisfies,
    split_eq,
    substitute,
    syntactic_incl,
)
from certpoly.numeric import EMPTY, ONE, ZERO, Q, SparseVector
from certpoly.simplex import Feasible, Infeasible, SimplexProblem, build, term_key

# Set by the test-suite: re-verify fragments and the simplex invariant at
# every step.
DEBUG = False

Flat = Tuple[Tuple[int, Constraint], ...]


@dataclass(frozen=True)
class EmptyProof:
    source: Flat
    witness: SparseVector


@dataclass(frozen=True)
class Polyhedron:
    nvars: int
    eqs: Tuple[Tuple[int, int, Constraint], ...] = ()  # (defined var, id, constraint)
    ineqs: Tuple[Tuple[int, Constraint], ...] = ()
    next_id: int = 0
    empty: Optional[EmptyProof] = None

    @property
    def is_bot(self) -> bool:
        return self.empty is not None

    def flat(self) -> Flat:
        """The constraint list read by the checker."""
        if self.empty is not None:
            return self.empty.source
        return tuple((cid, c) for _, cid, c in self.eqs) + self.ineqs

    def constraints(self) -> List[Constraint]:
        return [c for _, c in self.flat()] if not self.is_bot else []

    @property
    def size(self) -> int:
        return 0 if self.is_bot else len(self.eqs) + len(self.ineqs)

    def defined_vars(self) -> Tuple[int, ...]:
        return tuple(v for v, _, _ in self.eqs)

    def contains(self, point) -> bool:
        if self.is_bot:
            return False
        return all(satisfies(c, point) for _, c in self.flat())

    def __str__(self) -> str:
        if self.is_bot:
            return "bot"
        body = "; ".join(str(c) for c in self.constraints())
        return f"{{ {body} }}"


@dataclass(frozen=True)
class Obligation:
    """``lhs <= rhs``, justified by ``cert``."""

    what: str
    lhs: Flat
    rhs: Flat
    cert: Cert


@dataclass(frozen=True)
class FMStep:
    var: int
    zero: int
    pos: int
    neg: int
    generated: int


@dataclass(frozen=True)
class CertifiedResult:
    value: Polyhedron
    certs: Tuple[Obligation, ...] = ()
    fm_steps: Tuple[FMStep, ...] = field(default=(), compare=False)


class DomainError(RuntimeError):
    """An internal consistency check failed."""


# -- helpers on tagged systems ------------------------------------------------


def _check_faithful(tagged: Iterable[TaggedConstraint], source: Sequence[Tuple[int, Constraint]]) -> None:
    for t in tagged:
        got = canonicalize(recombine(t.frag, source))[0]
        want = t.cons
        if want.cmp is Cmp.EQ:
            want = Constraint(want.term, Cmp.LE, want.bound)
            if got.cmp is Cmp.EQ:
                got = Constraint(got.term, Cmp.LE, got.bound)
        if got != want:
            raise DomainError(f"fragment recombines to {got}, carried {t.cons}")


def _false_frag(t: TaggedConstraint) -> SparseVector:
    """Fragment deriving a contradiction from a trivially false tagged constraint."""
    c = t.cons
    if c.cmp is Cmp.EQ and c.bound > 0:
        return t.frag_ge
    return t.frag


def _defining_var(c: Constraint) -> int:
    return c.term.keys()[-1]


def _echelon(eqs: Sequence[TaggedConstraint]):
    """Reduced echelon form.

    Returns ``(defs, None)`` with ``defs`` a list of ``(var, tagged)``, or
    ``(None, witness_fragment)`` if the equalities are inconsistent.
    """
    defs: List[Tuple[int, TaggedConstraint]] = []
    for t in eqs:
        t = _subst(t, defs)
        if t.cons.is_trivial:
            if t.cons.trivially_false():
                return None, _false_frag(t)
            continue
        v = _defining_var(t.cons)
        cv = t.cons.term[v]
        out = []
        for u, d in defs:
            dv = d.cons.term.get(v)
            if dv != 0:
                d = tagged_combine([(ONE, d), (-dv / cv, t)])
            out.append((u, d))
        out.append((v, t))
        defs = out
    defs.sort(key=lambda ud: ud[0])
    return defs, None


def _subst(t: TaggedConstraint, defs: Sequence[Tuple[int, TaggedConstraint]]) -> TaggedConstraint:
    """Substitute reduced-echelon definitions into ``t``."""
    pairs = []
    term = t.cons.term
    for v, d in defs:
        cv = term.get(v)
        if cv != 0:
            pairs.append((-cv / d.cons.term[v], d))
    if not pairs:
        return t
    return tagged_combine([(ONE, t)] + pairs)


def _tighter(a: Constraint, b: Constraint) -> bool:
    """Same term: does ``a`` cut at least as much as ``b``?"""
    if a.bound != b.bound:
        return a.bound < b.bound
    return a.cmp is Cmp.LT or b.cmp is not Cmp.LT


def _dedupe(ineqs: Iterable[TaggedConstraint]):
    """Drop trivially true constraints and same-term duplicates.

    Returns ``(list, None)`` or ``(None, witness_fragment)`` on a trivially
    false constraint.
    """
    best: Dict[SparseVector, int] = {}
    out: List[Optional[TaggedConstraint]] = []
    for t in ineqs:
        c = t.cons
        if c.is_trivial:
            if c.trivially_false():
                return None, _false_frag(t)
            continue
        j = best.get(c.term)
        if j is None:
            best[c.term] = len(out)
            out.append(t)
        elif _tighter(c, out[j].cons) and not _tighter(out[j].cons, c):
            out[j] = t
    return out, None


def _witness_frag(witness, tagged: Dict[object, TaggedConstraint], skip=None, scale=ONE) -> SparseVector:
    f = EMPTY
    for label, coef in witness:
        if label == skip:
            continue
        f = f + tagged[label].directed(coef * scale)
    return f


def _single_bound(problem: SimplexProblem, label, c: Constraint):
    (bnd,) = problem.bounds_for(label, c)
    return bnd


def _drop_redundant(
    ineqs: List[TaggedConstraint],
    problem: Optional[SimplexProblem] = None,
    hints: Optional[Dict[int, SparseVector]] = None,
) -> List[TaggedConstraint]:
    """Remove every inequality implied by the others, scanning in order.

    ``hints`` maps positions to points believed to violate only that
    constraint; a hint that checks out settles non-redundancy without an LP.
    """
    if len(ineqs) <= 1:
        return list(ineqs)
    if problem is None:
        problem = build((i, t.cons) for i, t in enumerate(ineqs))
    alive = set(range(len(ineqs)))
    keep = []
    for i, t in enumerate(ineqs):
        pt = hints.get(i) if hints else None
        if pt is not None and not satisfies(t.cons, pt) and all(
            satisfies(ineqs[j].cons, pt) for j in alive if j != i
        ):
            keep.append(t)
            continue
        var, side, _ = _single_bound(problem, i, t.cons)
        own = problem.get_bound(var, side)
        if own is None or own.label != i:
            alive.discard(i)
            continue  # shadowed by a tighter same-term bound
        _, cside, cb = _single_bound(problem, ("not", i), complement(t.cons))
        opp = problem.get_bound(var, cside)
        problem.set_bound(var, side, None)
        problem.set_bound(var, cside, cb)
        out = problem.solve()
        problem.set_bound(var, cside, opp)
        if DEBUG and not problem.check_invariant():
            raise DomainError("simplex invariant broken")
        if isinstance(out, Infeasible):
            alive.discard(i)
            continue
        problem.set_bound(var, side, own)
        keep.append(t)
    return keep


def _prefilter(ineqs: List[TaggedConstraint]) -> Tuple[List[TaggedConstraint], Dict[int, SparseVector]]:
    """Cheap first pass of redundancy removal.

    Candidates are visited by increasing fragment length (combinations of few
    sources are the likely facets) and kept only if the ones kept so far do
    not imply them.  The kept set is equivalent to the input and every LP
    runs on the small kept set.  Input order is preserved in the output; the
    points that showed a constraint was needed come back as hints for
    :func:`_drop_redundant`.
    """
    if len(ineqs) <= 2:
        return list(ineqs), {}
    top = max((t.cons.term.keys()[-1] for t in ineqs if t.cons.term), default=-1)
    problem = SimplexProblem(top + 1)
    found: Dict[int, SparseVector] = {}
    for i in sorted(range(len(ineqs)), key=lambda i: (len(ineqs[i].frag), i)):
        c = ineqs[i].cons
        known = term_key(c.term)[0] in problem.term_slack
        var, cside, cb = _single_bound(problem, ("not", i), complement(c))
        opp = problem.get_bound(var, cside)
        problem.set_bound(var, cside, cb)
        out = problem.solve()
        problem.set_bound(var, cside, opp)
        if isinstance(out, Infeasible):
            if not known:
                problem.forget(var)
            continue
        problem.add_constraint(i, c)
        found[i] = out.point
    kept = sorted(found)
    return [ineqs[i] for i in kept], {k: found[i] for k, i in enumerate(kept)}


def _reduce(ineqs: List[TaggedConstraint]) -> List[TaggedConstraint]:
    """Redundancy elimination after a projection step."""
    kept, hints = _prefilter(ineqs)
    return _drop_redundant(kept, hints=hints)


def _as_eq(t: TaggedConstraint, ge_frag: SparseVector) -> TaggedConstraint:
    """Promote an inequality whose reverse direction ``ge_frag`` derives to an equality."""
    c = t.cons
    eq, g = canonicalize(Constraint(c.term, Cmp.EQ, c.bound))
    if g > 0:
        return TaggedConstraint(t.frag.scale(1 / g), eq, ge_frag.scale(1 / g))
    return TaggedConstraint(ge_frag.scale(-1 / g), eq, t.frag.scale(-1 / g))


@dataclass
class _System:
    defs: List[Tuple[int, TaggedConstraint]]
    ineqs: List[TaggedConstraint]


def _minimize_tagged(eqs: Sequence[TaggedConstraint], ineqs: Sequence[TaggedConstraint]) -> Union[_System, SparseVector]:
    """Full minimization; returns the system or an emptiness witness fragment."""
    defs, bad = _echelon(eqs)
    if bad is not None:
        return bad
    work, bad = _dedupe(_subst(t, defs) for t in ineqs)
    if bad is not None:
        return bad
    labelled = dict(enumerate(work))
    problem = build((i, t.cons) for i, t in labelled.items())
    out = problem.solve()
    if isinstance(out, Infeasible):
        return _witness_frag(out.witness, labelled)
    implicit: List[TaggedConstraint] = []
    rest: List[TaggedConstraint] = []
    for i, t in labelled.items():
        c = t.cons
        if c.cmp is not Cmp.LE:
            rest.append(t)
            continue
        var, side, strict = _single_bound(problem, ("lt", i), Constraint(c.term, Cmp.LT, c.bound))
        own = problem.get_bound(var, side)
        problem.set_bound(var, side, strict)
        res = problem.solve()
        problem.set_bound(var, side, own)
        if isinstance(res, Infeasible):
            lam = dict(res.witness).get(("lt", i), ZERO)
            if lam == 0:
                raise DomainError("implicit equality witness ignores its own constraint")
            ge = _witness_frag(res.witness, labelled, skip=("lt", i), scale=1 / lam)
            implicit.append(_as_eq(t, ge))
        else:
            rest.append(t)
    if implicit:
        defs, bad = _echelon([d for _, d in defs] + implicit)
        if bad is not None:
            raise DomainError("implicit equalities of a non-empty polyhedron are inconsistent")
        rest, bad = _dedupe(_subst(t, defs) for t in rest)
        if bad is not None:
            raise DomainError("substitution made a non-empty polyhedron empty")
        kept = _drop_redundant(rest)
    else:
        # the shared problem still holds exactly ``work``
        kept = _drop_redundant(work, problem)
    return _System(defs, kept)


def _assemble(nvars: int, system: _System) -> Tuple[Polyhedron, List[Tuple[int, TaggedConstraint]]]:
    """Number the constraints of a system; returns the polyhedron and id->tagged."""
    eqs = []
    ineqs = []
    tagged = []
    cid = 0
    for v, d in sorted(system.defs, key=lambda vd: vd[0]):
        eqs.append((v, cid, d.cons))
        tagged.append((cid, d))
        cid += 1
    for t in system.ineqs:
        ineqs.append((cid, t.cons))
        tagged.append((cid, t))
        cid += 1
    return Polyhedron(nvars, tuple(eqs), tuple(ineqs), cid), tagged


def _items(tagged: Sequence[Tuple[int, TaggedConstraint]], restrict=None) -> Tuple[Tuple[int, SparseVector], ...]:
    """Certificate items: one per inequality, one or two per equality."""
    items = []
    for cid, t in tagged:
        f = t.frag if restrict is None else restrict(t.frag)
        if t.cons.cmp is not Cmp.EQ:
            items.append((cid, f))
            continue
        g = t.frag_ge if restrict is None else restrict(t.frag_ge)
        if g == -f:
            items.append((cid, f))
        else:
            items.append((cid, f))
            items.append((cid, g))
    return tuple(items)


def _bot(nvars: int, source: Flat, witness: SparseVector, what: str) -> CertifiedResult:
    proof = EmptyProof(tuple(source), witness)
    return CertifiedResult(Polyhedron(nvars, empty=proof), (Obligation(what, tuple(source), proof.source, Empty(witness)),))


def _nvars_of(constraints: Iterable[Constraint]) -> int:
    n = 0
    for c in constraints:
        if c.term:
            n = max(n, c.term.keys()[-1] + 1)
    return n


# -- public operators ----------------------------------------------------------


def top(nvars: int) -> Polyhedron:
    return Polyhedron(nvars)


def minimize_flat(nvars: int, source: Sequence[Tuple[int, Constraint]], what: str = "minimize") -> CertifiedResult:
    """Minimize a raw constraint list (with ids); certifies ``source <= result``."""
    source = tuple(source)
    tagged = init_fragments(source)
    eqs = [t for t in tagged if t.cons.cmp is Cmp.EQ]
    ineqs = [t for t in tagged if t.cons.cmp is not Cmp.EQ]
    res = _minimize_tagged(eqs, ineqs)
    if isinstance(res, SparseVector):
        return _bot(nvars, source, res, what)
    if DEBUG:
        _check_faithful([d for _, d in res.defs] + res.ineqs, source)
    poly, tagged_out = _assemble(nvars, res)
    return CertifiedResult(poly, (Obligation(what, source, poly.flat(), Incl(_items(tagged_out))),))


def from_constraints(nvars: int, constraints: Iterable[Constraint]) -> CertifiedResult:
    """Minimize a raw list of constraints (ids are list positions)."""
    source = tuple(enumerate(canonicalize(c)[0] for c in constraints))
    nvars = max(nvars, _nvars_of(c for _, c in source))
    return minimize_flat(nvars, source)


def minimize(p: Union[Polyhedron, Sequence[Constraint]], nvars: Optional[int] = None) -> CertifiedResult:
    if isinstance(p, Polyhedron):
        if p.is_bot:
            return CertifiedResult(p, (Obligation("minimize", p.flat(), p.flat(), Empty(p.empty.witness)),))
        return minimize_flat(p.nvars, p.flat())
    return from_constraints(nvars or 0, p)


def _offset_flat(flat: Flat, off: int) -> Flat:
    return tuple((cid + off, c) for cid, c in flat)


def _span(flat: Flat) -> int:
    return max((cid for cid, _ in flat), default=-1) + 1


def meet(p1: Polyhedron, p2: Polyhedron) -> CertifiedResult:
    nvars = max(p1.nvars, p2.nvars)
    off = _span(p1.flat())
    source = p1.flat() + _offset_flat(p2.flat(), off)
    if p1.is_bot:
        return _bot(nvars, source, p1.empty.witness, "meet")
    if p2.is_bot:
        return _bot(nvars, source, p2.empty.witness.rename({k: k + off for k in p2.empty.witness.keys()}), "meet")
    return minimize_flat(nvars, source, "meet")


def incl_witness(p1: Polyhedron, p2: Polyhedron) -> Tuple[Optional[Cert], Optional[SparseVector]]:
    """Decide ``p1 <= p2``: ``(cert, None)`` if it holds, else ``(None, point)``.

    The point lies in ``p1`` but not in ``p2`` (``None`` when ``p2`` is Bot and
    ``p1`` is non-empty but no point was computed).
    """
    if p1.is_bot:
        return Empty(p1.empty.witness), None
    if p2.is_bot:
        problem = build((cid, c) for cid, c in p1.ineqs)
        out = problem.solve()
        return None, out.point if isinstance(out, Feasible) else None
    defs = [(v, c) for v, _, c in p1.eqs]
    eq_ids = [cid for _, cid, _ in p1.eqs]
    ineqs = dict(p1.ineqs)
    targets: List[Tuple[int, Constraint]] = []
    for tid, t in p2.flat():
        if t.cmp is Cmp.EQ:
            t_sub = substitute(t, defs)[0]
            if t_sub.trivially_true():
                targets.append((tid, t))
            else:
                targets.extend((tid, h) for h in split_eq(t))
        else:
            targets.append((tid, t))
    subs = [(tid, t) + substitute(t, defs) for tid, t in targets]
    problem = None
    items = []
    for tid, t, ts, kc, coefs in subs:
        eq_part = SparseVector.of((eq_ids[j], -k / kc) for j, k in coefs)
        if ts.is_trivial:
            if ts.trivially_false():
                return None, _point_on(p1)
            items.append((tid, eq_part))
            continue
        found = None
        for cid, c in p1.ineqs:
            k = syntactic_incl(c, ts)
            if k is not None:
                found = eq_part.add_scaled(SparseVector.unit(cid), k / kc)
                break
        if found is None:
            if problem is None:
                problem = build(p1.ineqs, [s[2].term for s in subs if not s[2].is_trivial])
            comp = complement(ts)
            var, side, cb = _single_bound(problem, "target", comp)
            cur = problem.get_bound(var, side)
            if cur is not None and (cur.value <= cb.value if side == "upper" else cur.value >= cb.value):
                # p1 already bounds this term at least as tightly as the complement
                return None, _point_of(problem)
            problem.set_bound(var, side, cb)
            out = problem.solve()
            problem.set_bound(var, side, cur)
            if isinstance(out, Feasible):
                return None, out.point
            lam = dict(out.witness).get("target", ZERO)
            if lam == 0:
                return Empty(SparseVector.of(out.witness)), None
            found = eq_part
            for cid, coef in out.witness:
                if cid != "target":
                    found = found.add_scaled(SparseVector.unit(cid), coef / lam / kc)
        items.append((tid, found))
    return Incl(tuple(items)), None


def _point_of(problem: SimplexProblem) -> Optional[SparseVector]:
    out = problem.solve()
    return out.point if isinstance(out, Feasible) else None


def _point_on(p: Polyhedron) -> Optional[SparseVector]:
    """Some point of a non-empty polyhedron (free variables at zero)."""
    out = build(p.ineqs).solve()
    if not isinstance(out, Feasible):
        return None
    vals = dict(out.point.items())
    for v, _, c in sorted(p.eqs, key=lambda e: e[0]):
        rest = c.bound - sum(a * vals.get(w, ZERO) for w, a in c.term.items() if w != v)
        vals[v] = rest / c.term[v]
    return SparseVector.of(vals)


def incl(p1: Polyhedron, p2: Polyhedron) -> Optional[Cert]:
    return incl_witness(p1, p2)[0]


# -- projection -----------------------------------------------------------------


def _history(t: TaggedConstraint, eq_ids) -> int:
    return sum(1 for cid in t.frag.keys() if cid not in eq_ids)


def _dedupe_same(ineqs: Iterable[TaggedConstraint], eq_ids):
    """Like :func:`_dedupe` but only identical constraints are merged, keeping
    the shortest history; a looser copy may be the one a later step needs."""
    best: Dict[Constraint, int] = {}
    out: List[TaggedConstraint] = []
    for t in ineqs:
        c = t.cons
        if c.is_trivial:
            if c.trivially_false():
                return None, _false_frag(t)
            continue
        j = best.get(c)
        if j is None:
            best[c] = len(out)
            out.append(t)
        elif _history(t, eq_ids) < _history(out[j], eq_ids):
            out[j] = t
    return out, None


def _eliminate(system: _System, v: int, steps: List[FMStep], eq_ids=None) -> _System:
    """One elimination step.

    With ``eq_ids`` (ids of source equalities) the step applies Chernikov's
    rule instead of exact redundancy removal: after ``k`` Fourier-Motzkin
    steps a combination of more than ``k + 1`` source inequalities is
    redundant.  The caller must run the exact removal once at the end.
    """
    reduce = _reduce if eq_ids is None else list
    defs = system.defs
    for i, (u, d) in enumerate(defs):
        if u == v:
            return _System(defs[:i] + defs[i + 1:], system.ineqs)
    for i, (u, d) in enumerate(defs):
        dv = d.cons.term.get(v)
        if dv != 0:
            # re-pivot d on v and use it as a substitution
            rest = []
            for w, e in defs[:i] + defs[i + 1:]:
                ev = e.cons.term.get(v)
                rest.append((w, e if ev == 0 else tagged_combine([(ONE, e), (-ev / dv, d)])))
            ineqs = []
            for t in system.ineqs:
                tv = t.cons.term.get(v)
                ineqs.append(t if tv == 0 else tagged_combine([(ONE, t), (-tv / dv, d)]))
            kept, bad = _dedupe(ineqs)
            if bad is not None:
                raise DomainError("projection produced a contradiction")
            return _System(rest, reduce(kept))
    zero, pos, neg = [], [], []
    for t in system.ineqs:
        a = t.cons.term.get(v)
        (zero if a == 0 else pos if a > 0 else neg).append(t)
    if not pos and not neg:
        return system
    generated = list(zero)
    if eq_ids is not None:
        limit = sum(1 for st in steps if st.pos or st.neg) + 2
        hist = {id(t): frozenset(cid for cid in t.frag.keys() if cid not in eq_ids) for t in pos + neg}
    for tp in pos:
        ap = tp.cons.term[v]
        for tn in neg:
            if eq_ids is not None and len(hist[id(tp)] | hist[id(tn)]) > limit:
                continue
            an = tn.cons.term[v]
            generated.append(tagged_combine([(-an, tp), (ap, tn)]))
    steps.append(FMStep(v, len(zero), len(pos), len(neg), len(generated)))
    if eq_ids is not None:
        kept, bad = _dedupe_same([t for t in generated if _history(t, eq_ids) <= limit], eq_ids)
    else:
        kept, bad = _dedupe(generated)
    if bad is not None:
        raise DomainError("projection produced a contradiction")
    return _System(defs, reduce(kept))


def _fm_cost(system: _System, v: int) -> Tuple[int, int]:
    if any(u == v or d.cons.term.get(v) != 0 for u, d in system.defs):
        return (0, v)
    pos = neg = 0
    for t in system.ineqs:
        a = t.cons.term.get(v)
        if a > 0:
            pos += 1
        elif a < 0:
            neg += 1
    return (pos * neg, v)


def _project_system(system: _System, vars_: Sequence[int], order: str, steps: List[FMStep], eq_ids=None) -> _System:
    remaining = list(vars_)
    while remaining:
        if order == "fixed":
            v = remaining.pop(0)
        else:
            v = min(remaining, key=lambda w: _fm_cost(system, w))
            remaining.remove(v)
        system = _eliminate(system, v, steps, eq_ids)
    # restore the canonical choice of defined variables
    defs, bad = _echelon([d for _, d in system.defs])
    if bad is not None:
        raise DomainError("projection made the equalities inconsistent")
    ineqs, bad = _dedupe(_subst(t, defs) for t in system.ineqs)
    if bad is not None:
        raise DomainError("projection produced a contradiction")
    if eq_ids is not None:
        ineqs = _reduce(ineqs)
    return _System(defs, ineqs)


def _system_of(p: Polyhedron) -> _System:
    defs = [(v, tagged_source(cid, c)) for v, cid, c in p.eqs]
    return _System(defs, [tagged_source(cid, c) for cid, c in p.ineqs])


def project(p: Polyhedron, vars_: Iterable[int]) -> CertifiedResult:
    """Eliminate ``vars_``; certifies ``p <= result``."""
    if p.is_bot:
        return CertifiedResult(p, (Obligation("project", p.flat(), p.flat(), Empty(p.empty.witness)),))
    vars_ = sorted(set(vars_))
    steps: List[FMStep] = []
    system = _project_system(_system_of(p), vars_, "greedy", steps)
    if DEBUG:
        _check_faithful([d for _, d in system.defs] + system.ineqs, p.flat())
    poly, tagged = _assemble(p.nvars, system)
    return CertifiedResult(poly, (Obligation("project", p.flat(), poly.flat(), Incl(_items(tagged))),), tuple(steps))


def assign(p: Polyhedron, assignments: Sequence[Tuple[int, SparseVector, object]]) -> CertifiedResult:
    """Parallel assignment ``x_i := e_i . x + c_i``.

    The certificate proves that ``p`` together with ``x'_i = e_i`` (fresh
    ``x'_i``) is included in the result written over the fresh variables.
    """
    if p.is_bot:
        return CertifiedResult(p, (Obligation("assign", p.flat(), p.flat(), Empty(p.empty.witness)),))
    targets = [v for v, _, _ in assignments]
    if len(set(targets)) != len(targets):
        raise ValueError("a variable is assigned twice")
    n = max([p.nvars] + [v + 1 for v in targets] + [_nvars_of([Constraint(e, Cmp.EQ, 0) for _, e, _ in assignments])])
    fresh = {v: n + i for i, v in enumerate(targets)}
    base = _span(p.flat())
    extra = []
    for i, (v, e, c) in enumerate(assignments):
        # x'_v - e = c
        eq = canonicalize(Constraint(SparseVector.unit(fresh[v]) - e, Cmp.EQ, Q(c)))[0]
        extra.append((base + i, eq))
    source = p.flat() + tuple(extra)
    system = _system_of(p)
    defs, bad = _echelon([d for _, d in system.defs] + [tagged_source(cid, c) for cid, c in extra])
    if bad is not None:
        raise DomainError("assignment equalities are inconsistent")
    system = _System(defs, [_subst(t, defs) for t in system.ineqs])
    steps: List[FMStep] = []
    system = _project_system(system, sorted(targets), "greedy", steps)
    if DEBUG:
        _check_faithful([d for _, d in system.defs] + system.ineqs, source)
    pre, tagged = _assemble(n + len(targets), system)
    back = {fresh[v]: v for v in targets}
    renamed = []
    for cid, t in tagged:
        renamed.append((cid, TaggedConstraint(t.frag, _rename(t.cons, back), t.frag_ge)))
    defs2, bad = _echelon([t for cid, t in renamed if t.cons.cmp is Cmp.EQ])
    ineqs2 = [t for cid, t in renamed if t.cons.cmp is not Cmp.EQ]
    ineqs2, _ = _dedupe(_subst(t, defs2) for t in ineqs2)
    poly, _ = _assemble(max(p.nvars, n), _System(defs2, ineqs2))
    ob = Obligation("assign", source, pre.flat(), Incl(_items(tagged)))
    return CertifiedResult(poly, (ob,), tuple(steps))


def _rename(c: Constraint, mapping: Dict[int, int]) -> Constraint:
    return canonicalize(Constraint(c.term.rename(mapping), c.cmp, c.bound))[0]


# -- convex hull ------------------------------------------------------------------


def join(p1: Polyhedron, p2: Polyhedron) -> CertifiedResult:
    """Convex hull on constraints, certified for both operands."""
    n = max(p1.nvars, p2.nvars)
    if p1.is_bot or p2.is_bot:
        keep, other = (p2, p1) if p1.is_bot else (p1, p2)
        keep = Polyhedron(n, keep.eqs, keep.ineqs, keep.next_id, keep.empty)
        obs = [Obligation("join", other.flat(), keep.flat(), Empty(other.empty.witness))]
        if keep.is_bot:
            obs.append(Obligation("join", keep.flat(), keep.flat(), Empty(keep.empty.witness)))
        else:
            ident = tuple((cid, SparseVector.unit(cid)) for cid, _ in keep.flat())
            obs.append(Obligation("join", keep.flat(), keep.flat(), Incl(ident)))
        return CertifiedResult(keep, tuple(obs) if p1.is_bot else tuple(reversed(obs)))
    for small, big, label in ((p1, p2, "left"), (p2, p1, "right")):
        cert = incl(small, big)
        if cert is not None:
            big = Polyhedron(n, big.eqs, big.ineqs, big.next_id)
            ident = tuple((cid, SparseVector.unit(cid)) for cid, _ in big.flat())
            obs = {label: Obligation(f"join/{label}", small.flat(), big.flat(), cert)}
            other = "right" if label == "left" else "left"
            obs[other] = Obligation(f"join/{other}", big.flat(), big.flat(), Incl(ident))
            return CertifiedResult(big, (obs["left"], obs["right"]))
    flat1, flat2 = p1.flat(), p2.flat()
    off2 = _span(flat1)
    off3 = off2 + _span(flat2)
    x1 = lambda j: n + j  # noqa: E731
    x2 = lambda j: 2 * n + j  # noqa: E731
    a1, a2 = 3 * n, 3 * n + 1

    def lift(c: Constraint, xs, alpha) -> Constraint:
        # closures only; strictness is settled on the result below
        term = SparseVector.of([(xs(j), a) for j, a in c.term.items()] + [(alpha, -c.bound)])
        return Constraint(term, Cmp.EQ if c.cmp is Cmp.EQ else Cmp.LE, ZERO)

    source: List[Tuple[int, Constraint]] = []
    for cid, c in flat1:
        source.append((cid, lift(c, x1, a1)))
    for cid, c in flat2:
        source.append((off2 + cid, lift(c, x2, a2)))
    nid = off3
    for j in range(n):
        term = SparseVector.of({j: 1, x1(j): -1, x2(j): -1})
        source.append((nid, Constraint(term, Cmp.EQ, ZERO)))
        nid += 1
    source.append((nid, Constraint(SparseVector.of({a1: 1, a2: 1}), Cmp.EQ, ONE)))
    source.append((nid + 1, Constraint(SparseVector.unit(a1, -1), Cmp.LE, ZERO)))
    source.append((nid + 2, Constraint(SparseVector.unit(a2, -1), Cmp.LE, ZERO)))
    # canonical lifted rows are raw rows divided by g; fragments over them
    # translate back to the operands by the same factor
    scale = {}
    canon = []
    for cid, c in source:
        cc, g = canonicalize(c)
        scale[cid] = 1 / g
        canon.append((cid, cc))
    source = canon

    tagged = init_fragments(source)
    defs, bad = _echelon([t for t in tagged if t.cons.cmp is Cmp.EQ])
    if bad is not None:
        raise DomainError("hull system equalities are inconsistent")
    ineqs, bad = _dedupe(_subst(t, defs) for t in tagged if t.cons.cmp is not Cmp.EQ)
    if bad is not None:
        raise DomainError("hull system is contradictory")
    system = _System(defs, _drop_redundant(ineqs))
    auxiliaries = [a2, a1] + [x2(j) for j in range(n)] + [x1(j) for j in range(n)]
    steps: List[FMStep] = []
    eq_ids = {cid for cid, c in source if c.cmp is Cmp.EQ}
    system = _project_system(system, auxiliaries, "greedy", steps, eq_ids)
    if DEBUG:
        _check_faithful([d for _, d in system.defs] + system.ineqs, source)

    def part1(f: SparseVector) -> SparseVector:
        return SparseVector.of((cid, c * scale[cid]) for cid, c in f.items() if cid < off2)

    def part2(f: SparseVector) -> SparseVector:
        return SparseVector.of((cid - off2, c * scale[cid]) for cid, c in f.items() if off2 <= cid < off3)

    # a closure facet is strict in the hull iff both operands satisfy its
    # strict version; with closed operands every facet is attained
    strict_in = any(c.cmp is Cmp.LT for _, c in flat1 + flat2)
    over1: Dict[int, SparseVector] = {}
    over2: Dict[int, SparseVector] = {}
    ineqs_out = []
    for t in system.ineqs:
        c = t.cons
        if strict_in:
            lt = Constraint(c.term, Cmp.LT, c.bound)
            f1 = _strict_frag(p1, flat1, part1(t.frag), lt)
            f2 = _strict_frag(p2, flat2, part2(t.frag), lt) if f1 is not None else None
            if f1 is not None and f2 is not None:
                t = TaggedConstraint(t.frag, lt)
                over1[len(ineqs_out)] = f1
                over2[len(ineqs_out)] = f2
        ineqs_out.append(t)
    system = _System(system.defs, ineqs_out)
    poly, tagged_out = _assemble(n, system)
    first = len(system.defs)

    def items(part, over):
        out = []
        for cid, f in _items(tagged_out, part):
            out.append((cid, over.get(cid - first, f)) if cid >= first else (cid, f))
        return tuple(out)

    ob1 = Obligation("join/left", flat1, poly.flat(), Incl(items(part1, over1)))
    ob2 = Obligation("join/right", flat2, poly.flat(), Incl(items(part2, over2)))
    return CertifiedResult(poly, (ob1, ob2), tuple(steps))


def _strict_frag(p: Polyhedron, flat: Flat, frag: SparseVector, lt: Constraint) -> Optional[SparseVector]:
    """A fragment over ``p`` deriving ``lt``, or None if ``p`` does not entail it."""
    if _strict_ok(recombine(frag, flat), lt):
        return frag
    cert = incl(p, Polyhedron(p.nvars, (), ((0, lt),), 1))
    if cert is None:
        return None
    ((_, f),) = cert.items
    return f


def _strict_ok(comb: Constraint, target: Constraint) -> bool:
    if not comb.term and not target.term:
        return True
    k = None
    for v, a in target.term.items():
        k = comb.term.get(v) / a if k is None else k
        break
    if k is None or k <= 0:
        return False
    return comb.cmp is Cmp.LT or comb.bound / k < target.bound


# -- widening -----------------------------------------------------------------------


def widen(p1: Polyhedron, p2: Polyhedron) -> Polyhedron:
    """Keep the constraints of ``p1`` that ``p2`` satisfies."""
    if p1.is_bot:
        return p2
    if p2.is_bot:
        return p1
    kept: List[Constraint] = []
    for _, c in p1.flat():
        single = Polyhedron(p1.nvars, (), ((0, c),), 1) if c.cmp is not Cmp.EQ else None
        if c.cmp is Cmp.EQ:
            eq_poly = minimize_flat(p1.nvars, ((0, c),)).value
            if incl(p2, eq_poly) is not None:
                kept.append(c)
                continue
            for h in split_eq(c):
                if incl(p2, Polyhedron(p1.nvars, (), ((0, canonicalize(h)[0]),), 1)) is not None:
                    kept.append(canonicalize(h)[0])
        elif incl(p2, single) is not None:
            kept.append(c)
    return from_constraints(p1.nvars, kept).value
