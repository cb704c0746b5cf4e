"""Linear constraints ``a.x <cmp> b`` and their combination algebra."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple

from certpoly.numeric import (
    EMPTY,
    ONE,
    ZERO,
    Q,
    SparseVector,
    format_rational,
    parse_rational,
    vec_gcd_normalize,
)


class Cmp(enum.Enum):
    LE = "<="
    LT = "<"
    EQ = "="

    def __str__(self) -> str:
        return self.value


class InvalidCombination(ValueError):
    """A negative coefficient was applied to an inequality."""


@dataclass(frozen=True)
class Constraint:
    term: SparseVector
    cmp: Cmp
    bound: object

    @staticmethod
    def of(term, cmp: Cmp, bound) -> "Constraint":
        """Build a canonical constraint; ``term`` may be a mapping."""
        if not isinstance(term, SparseVector):
            term = SparseVector.of(term)
        return canonicalize(Constraint(term, cmp, Q(bound)))[0]

    @property
    def is_trivial(self) -> bool:
        return not self.term

    def trivially_true(self) -> bool:
        if self.term:
            return False
        return _holds(ZERO, self.cmp, self.bound)

    def trivially_false(self) -> bool:
        return not self.term and not _holds(ZERO, self.cmp, self.bound)

    def vars(self) -> Tuple[int, ...]:
        return self.term.keys()

    def __str__(self) -> str:
        return f"{format_term(self.term)} {self.cmp} {format_rational(self.bound)}"


def _holds(lhs, cmp: Cmp, rhs) -> bool:
    if cmp is Cmp.LE:
        return lhs <= rhs
    if cmp is Cmp.LT:
        return lhs < rhs
    return lhs == rhs


def canonicalize(c: Constraint) -> Tuple[Constraint, object]:
    """Return ``(canon, g)`` with ``c == g*canon`` termwise.

    ``g`` is positive for inequalities; equalities get a positive lowest-index
    coefficient, so ``g`` may be negative for them.
    """
    if not c.term:
        return c, ONE
    term, g = vec_gcd_normalize(c.term)
    if c.cmp is Cmp.EQ and term.lead()[1] < 0:
        term = -term
        g = -g
    if g == 1:
        return (c if term is c.term else Constraint(term, c.cmp, c.bound)), ONE
    return Constraint(term, c.cmp, c.bound / g), g


def satisfies(c: Constraint, point) -> bool:
    return _holds(c.term.dot(point), c.cmp, c.bound)


def lin_comb(pairs: Sequence[Tuple[object, Constraint]]) -> Constraint:
    """Raw (non-canonical) combination ``sum k_i c_i``.

    Inequalities need ``k_i >= 0``; equalities accept any sign.  The result is
    an equality when every operand with a nonzero coefficient is one, strict
    when any such operand is strict.
    """
    term = EMPTY
    bound = ZERO
    all_eq = True
    strict = False
    for k, c in pairs:
        if k == 0:
            continue
        if c.cmp is not Cmp.EQ:
            if k < 0:
                raise InvalidCombination(f"negative coefficient {k} on inequality {c}")
            all_eq = False
            if c.cmp is Cmp.LT:
                strict = True
        term = term.add_scaled(c.term, k)
        bound = bound + k * c.bound
    cmp = Cmp.EQ if all_eq else (Cmp.LT if strict else Cmp.LE)
    return Constraint(term, cmp, bound)


def combine(k1, c1: Constraint, k2, c2: Constraint) -> Constraint:
    return canonicalize(lin_comb([(k1, c1), (k2, c2)]))[0]


def complement(c: Constraint) -> Constraint:
    """The complementary half-space: ``a.x <= b`` becomes ``-a.x < -b`` and vice versa."""
    if c.cmp is Cmp.EQ:
        raise ValueError("equalities have no complementary half-space; split them first")
    cmp = Cmp.LT if c.cmp is Cmp.LE else Cmp.LE
    return Constraint(-c.term, cmp, -c.bound)


def split_eq(c: Constraint) -> Tuple[Constraint, Constraint]:
    """``a.x = b`` as ``(a.x <= b, -a.x <= -b)``."""
    return Constraint(c.term, Cmp.LE, c.bound), Constraint(-c.term, Cmp.LE, -c.bound)


def term_ratio(t1: SparseVector, t2: SparseVector):
    """The ``k`` with ``k*t1 == t2``, or None."""
    if len(t1) != len(t2):
        return None
    if not t1:
        return ONE
    i, a = t1.lead()
    b = t2.get(i)
    if b == 0:
        return None
    k = b / a
    for j, aj in t1.items():
        if t2.get(j) != k * aj:
            return None
    return k


def syntactic_incl(c1: Constraint, c2: Constraint):
    """A ``k`` such that ``k*c1`` syntactically entails ``c2``, or None.

    Strict targets are entailed by strict sources, or by non-strict ones whose
    rescaled bound is strictly below the target bound.  Equality sources may be
    scaled by a negative ``k``.
    """
    k = term_ratio(c1.term, c2.term)
    if k is None:
        return None
    if not c1.term:
        # constant constraints: only compare truth values
        if c1.trivially_false() or c2.trivially_true():
            return ONE
        return None
    if c2.cmp is Cmp.EQ:
        if c1.cmp is Cmp.EQ and k * c1.bound == c2.bound:
            return k
        return None
    if k < 0 and c1.cmp is not Cmp.EQ:
        return None
    kb = k * c1.bound
    if c2.cmp is Cmp.LE:
        return k if kb <= c2.bound else None
    if kb < c2.bound or (c1.cmp is Cmp.LT and kb == c2.bound):
        return k
    return None


def substitute(c: Constraint, defs: Sequence[Tuple[int, Constraint]]):
    """Eliminate the defined variables of ``defs`` from ``c``.

    Returns ``(result, k_c, coefs)`` where ``coefs`` lists ``(def_index, k_j)``
    and ``result == canonicalize(k_c*c + sum k_j*defs[j])``.
    """
    raw = c
    coefs: List[Tuple[int, object]] = []
    for j, (v, e) in enumerate(defs):
        cv = raw.term.get(v)
        if cv == 0:
            continue
        k = -cv / e.term[v]
        raw = Constraint(raw.term.add_scaled(e.term, k), raw.cmp, raw.bound + k * e.bound)
        coefs.append((j, k))
    if not coefs:
        return c, ONE, []
    result, g = canonicalize(raw)
    inv = 1 / g
    return result, inv, [(j, k * inv) for j, k in coefs]


# -- text form ---------------------------------------------------------------


def format_term(term: SparseVector) -> str:
    if not term:
        return "0"
    return " + ".join(f"{format_rational(a)}*x{i}" for i, a in term.items())


def format_linexpr(term: SparseVector, const) -> str:
    parts = [f"{format_rational(a)}*x{i}" for i, a in term.items()]
    if const != 0 or not parts:
        parts.append(format_rational(const))
    return " + ".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x\d+)|(?P<op><=|>=|<|>|=|\+|-|\*))"
)


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> List[Tuple[str, str]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


def parse_linexpr(text: str) -> Tuple[SparseVector, object]:
    """Parse ``2*x0 + -1*x1 + 3`` into ``(term, constant)``."""
    toks = _tokenize(text)
    coeffs: dict = {}
    const = ZERO
    i = 0
    expect_term = True
    sign = 1
    if not toks:
        raise ParseError("empty expression")
    while i < len(toks):
        kind, val = toks[i]
        if not expect_term:
            if kind == "op" and val in "+-":
                sign = 1 if val == "+" else -1
                expect_term = True
                i += 1
                continue
            raise ParseError(f"expected '+' or '-' before {val!r}")
        if kind == "op" and val in "+-":
            sign = -sign if val == "-" else sign
            i += 1
            continue
        if kind == "num":
            coef = parse_rational(val)
            if i + 1 < len(toks) and toks[i + 1] == ("op", "*"):
                if i + 2 >= len(toks) or toks[i + 2][0] != "var":
                    raise ParseError("expected variable after '*'")
                idx = int(toks[i + 2][1][1:])
                coeffs[idx] = coeffs.get(idx, ZERO) + sign * coef
                i += 3
            else:
                const += sign * coef
                i += 1
        elif kind == "var":
            idx = int(val[1:])
            coeffs[idx] = coeffs.get(idx, ZERO) + sign
            i += 1
        else:
            raise ParseError(f"unexpected {val!r}")
        sign = 1
        expect_term = False
    if expect_term:
        raise ParseError("dangling operator")
    return SparseVector.of(coeffs), const


_CMP_SPLIT = re.compile(r"(<=|>=|<|>|=)")


def parse_constraint(text: str, canonical: bool = True) -> Constraint:
    """Parse e.g. ``2*x0 + 1*x1 <= 2``; ``>=``/``>`` are flipped."""
    parts = _CMP_SPLIT.split(text)
    if len(parts) != 3:
        raise ParseError(f"expected exactly one comparison in {text!r}")
    lhs_t, lhs_c = parse_linexpr(parts[0])
    rhs_t, rhs_c = parse_linexpr(parts[2])
    term = lhs_t - rhs_t
    bound = rhs_c - lhs_c
    op = parts[1]
    if op in (">=", ">"):
        term, bound = -term, -bound
        op = "<=" if op == ">=" else "<"
    c = Constraint(term, {"<=": Cmp.LE, "<": Cmp.LT, "=": Cmp.EQ}[op], bound)
    return canonicalize(c)[0] if canonical else c
