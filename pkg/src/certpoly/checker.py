"""Independent certificate checker.

Trusted side of the library: confirms ``P1 <= P2`` from a certificate using only
weighted sums and comparisons over the numeric layer.  It deliberately shares no
algorithmic code with the producer (no simplex, no projection, no combination
helpers from :mod:`certpoly.constraint`); only the constraint record type and
the :class:`Cmp` tags are read.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

from certpoly.certificate import Cert, Empty, Incl
from certpoly.constraint import Cmp, Constraint
from certpoly.numeric import ZERO


@dataclass(frozen=True)
class Value:
    """Inclusion verified."""


@dataclass(frozen=True)
class Error:
    reason: str


CheckOutcome = Union[Value, Error]


class _Reject(Exception):
    pass


def _combine(src: Dict[int, Constraint], cert) -> Tuple[Dict[int, object], object, Cmp]:
    term: Dict[int, object] = {}
    bound = ZERO
    kind = Cmp.EQ
    for cid, coef in cert.items():
        if coef == 0:
            continue
        c = src.get(cid)
        if c is None:
            raise _Reject(f"unknown source id {cid}")
        if c.cmp is not Cmp.EQ:
            if coef < 0:
                raise _Reject(f"negative coefficient {coef} on inequality {cid}")
            if c.cmp is Cmp.LT:
                kind = Cmp.LT
            elif kind is Cmp.EQ:
                kind = Cmp.LE
        for v, a in c.term.items():
            s = term.get(v, ZERO) + coef * a
            if s == 0:
                term.pop(v, None)
            else:
                term[v] = s
        bound = bound + coef * c.bound
    return term, bound, kind


def _false_constant(bound, kind: Cmp) -> bool:
    if kind is Cmp.EQ:
        return bound != 0
    if kind is Cmp.LT:
        return bound <= 0
    return bound < 0


def _entails(comb, target: Constraint) -> bool:
    term, bound, kind = comb
    goal = dict(target.term.items())
    if not goal:
        # constant target: holds outright or the combination is a contradiction
        return (not term and _false_constant(bound, kind)) or not _false_constant(target.bound, target.cmp)
    if set(term) != set(goal):
        return False
    v = next(iter(goal))
    k = goal[v] / term[v]
    for w, a in term.items():
        if k * a != goal[w]:
            return False
    kb = k * bound
    if target.cmp is Cmp.EQ:
        return kind is Cmp.EQ and kb == target.bound
    if k < 0 and kind is not Cmp.EQ:
        return False
    if target.cmp is Cmp.LE:
        return kb <= target.bound
    return kb < target.bound or (kind is Cmp.LT and kb == target.bound)


def _halves(c: Constraint) -> Tuple[Constraint, Constraint]:
    neg = type(c.term).of({v: -a for v, a in c.term.items()})
    return Constraint(c.term, Cmp.LE, c.bound), Constraint(neg, Cmp.LE, -c.bound)


def check(p1: Sequence[Tuple[int, Constraint]], p2: Sequence[Tuple[int, Constraint]], cert: Cert) -> CheckOutcome:
    try:
        src: Dict[int, Constraint] = {}
        for cid, c in p1:
            if cid in src:
                raise _Reject(f"duplicate source id {cid}")
            src[cid] = c
        if isinstance(cert, Empty):
            term, bound, kind = _combine(src, cert.witness)
            if term or not _false_constant(bound, kind):
                raise _Reject("emptiness witness does not combine to a contradiction")
            return Value()
        if not isinstance(cert, Incl):
            raise _Reject("unknown certificate kind")
        targets: Dict[int, Constraint] = {}
        for tid, c in p2:
            if tid in targets:
                raise _Reject(f"duplicate target id {tid}")
            targets[tid] = c
        items: Dict[int, List] = {}
        for tid, f in cert.items:
            if tid not in targets:
                raise _Reject(f"certificate item for unknown target {tid}")
            items.setdefault(tid, []).append(_combine(src, f))
        for tid, c in targets.items():
            got = items.get(tid)
            if not got:
                raise _Reject(f"target {tid} not covered")
            if len(got) == 1:
                if not _entails(got[0], c):
                    raise _Reject(f"combination mismatch on target {tid}")
            elif len(got) == 2 and c.cmp is Cmp.EQ:
                le, ge = _halves(c)
                a, b = got
                if not ((_entails(a, le) and _entails(b, ge)) or (_entails(a, ge) and _entails(b, le))):
                    raise _Reject(f"combination mismatch on equality target {tid}")
            else:
                raise _Reject(f"target {tid} covered {len(got)} times")
        return Value()
    except _Reject as exc:
        return Error(str(exc))
