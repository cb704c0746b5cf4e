"""Certificate data model and fragment bookkeeping.

A fragment is a :class:`SparseVector` keyed by constraint id: entry ``cid ->
n`` reads "``n`` times constraint ``cid``".  Keying by id merges duplicate ids
eagerly, so fragments stay as short as the set of constraints they touch.

Text forms::

    incl { 3: [(1, 0), (2, 1)]; 4: [(1/2, 2)] }
    empty [(1, 0), (1, 1)]

Flat polyhedra (the checker's input) are written one ``<id>: <constraint>`` per
line; blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from certpoly.constraint import (
    Cmp,
    Constraint,
    ParseError,
    canonicalize,
    lin_comb,
    parse_constraint,
)
from certpoly.numeric import EMPTY, ONE, SparseVector, format_rational, parse_rational

CertFragment = SparseVector
CertOneConstraint = SparseVector
FlatPolyhedron = Sequence[Tuple[int, Constraint]]


def frag(pairs: Iterable[Tuple[object, int]] = ()) -> CertFragment:
    """Fragment from ``(coef, cid)`` pairs."""
    return SparseVector.of((cid, coef) for coef, cid in pairs)


def frag_pairs(f: CertFragment) -> List[Tuple[object, int]]:
    return [(coef, cid) for cid, coef in f.items()]


def frag_scale_concat(k1, f1: CertFragment, k2, f2: CertFragment) -> CertFragment:
    """``k1*f1 @ k2*f2`` merged by id."""
    return f1.scale(k1).add_scaled(f2, k2)


def recombine(f: CertFragment, source: FlatPolyhedron) -> Constraint:
    """Raw combination of ``source`` constraints weighted by ``f``."""
    by_id = dict(source)
    return lin_comb([(coef, by_id[cid]) for cid, coef in f.items()])


@dataclass(frozen=True)
class Incl:
    items: Tuple[Tuple[int, CertOneConstraint], ...]

    def __str__(self) -> str:
        body = "; ".join(f"{tid}: {_fmt_frag(f)}" for tid, f in self.items)
        return f"incl {{ {body} }}" if body else "incl { }"


@dataclass(frozen=True)
class Empty:
    witness: CertOneConstraint

    def __str__(self) -> str:
        return f"empty {_fmt_frag(self.witness)}"


Cert = Union[Incl, Empty]


@dataclass(frozen=True)
class TaggedConstraint:
    """A constraint together with how it was derived from a source polyhedron.

    For an equality, ``frag`` derives the ``a.x <= b`` direction and
    ``frag_ge`` the ``-a.x <= -b`` direction; both are needed once equalities
    have been discovered from pairs of inequalities.
    """

    frag: CertFragment
    cons: Constraint
    frag_ge: Optional[CertFragment] = field(default=None)

    def directed(self, k) -> CertFragment:
        """Fragment deriving ``k*cons``."""
        if k >= 0 or self.cons.cmp is not Cmp.EQ:
            return self.frag.scale(k)
        return self.frag_ge.scale(-k)


def tagged_source(cid: int, c: Constraint) -> TaggedConstraint:
    f = SparseVector.unit(cid)
    if c.cmp is Cmp.EQ:
        return TaggedConstraint(f, c, SparseVector.unit(cid, -1))
    return TaggedConstraint(f, c)


def init_fragments(source: FlatPolyhedron) -> List[TaggedConstraint]:
    return [tagged_source(cid, c) for cid, c in source]


def tagged_combine(pairs: Sequence[Tuple[object, TaggedConstraint]]) -> TaggedConstraint:
    """Canonical combination of tagged constraints, fragments carried along."""
    raw = lin_comb([(k, t.cons) for k, t in pairs])
    f = EMPTY
    for k, t in pairs:
        if k != 0:
            f = f + t.directed(k)
    f_ge = None
    if raw.cmp is Cmp.EQ:
        f_ge = EMPTY
        for k, t in pairs:
            if k != 0:
                f_ge = f_ge + t.directed(-k)
    cons, g = canonicalize(raw)
    if g == ONE:
        return TaggedConstraint(f, cons, f_ge)
    if g > 0:
        inv = 1 / g
        return TaggedConstraint(f.scale(inv), cons, None if f_ge is None else f_ge.scale(inv))
    inv = -1 / g
    return TaggedConstraint(f_ge.scale(inv), cons, f.scale(inv))


def tagged_halves(t: TaggedConstraint) -> Tuple[TaggedConstraint, TaggedConstraint]:
    """An equality as its two inequality directions."""
    c = t.cons
    le = Constraint(c.term, Cmp.LE, c.bound)
    ge = Constraint(-c.term, Cmp.LE, -c.bound)
    return TaggedConstraint(t.frag, le), TaggedConstraint(t.frag_ge, ge)


# -- text form ---------------------------------------------------------------


def _fmt_frag(f: CertFragment) -> str:
    return "[" + ", ".join(f"({format_rational(c)}, {cid})" for c, cid in frag_pairs(f)) + "]"


_PAIR = re.compile(r"\(\s*(-?\d+(?:/\d+)?)\s*,\s*(\d+)\s*\)")


def _parse_frag(text: str) -> CertFragment:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"expected a bracketed list, got {text!r}")
    inner = text[1:-1]
    if _PAIR.sub("", inner).replace(",", "").strip():
        raise ParseError(f"bad certificate entries in {text!r}")
    # duplicates are summed, matching the merge-by-id convention
    return SparseVector.of((int(cid), parse_rational(c)) for c, cid in _PAIR.findall(inner))


def format_cert(cert: Cert) -> str:
    return str(cert)


def parse_cert(text: str) -> Cert:
    text = " ".join(text.split())
    if text.startswith("empty"):
        return Empty(_parse_frag(text[len("empty"):]))
    if text.startswith("incl"):
        body = text[len("incl"):].strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ParseError("incl certificate needs braces")
        body = body[1:-1].strip()
        items = []
        for chunk in filter(None, (s.strip() for s in body.split(";"))):
            tid, _, fr = chunk.partition(":")
            if not _:
                raise ParseError(f"missing ':' in {chunk!r}")
            items.append((int(tid), _parse_frag(fr)))
        return Incl(tuple(items))
    raise ParseError("certificate must start with 'incl' or 'empty'")


def format_flat(poly: FlatPolyhedron) -> str:
    return "".join(f"{cid}: {c}\n" for cid, c in poly)


def parse_flat(text: str) -> List[Tuple[int, Constraint]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        cid, sep, body = line.partition(":")
        if not sep:
            raise ParseError(f"line {lineno}: expected '<id>: <constraint>'")
        try:
            out.append((int(cid), parse_constraint(body, canonical=False)))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return out
