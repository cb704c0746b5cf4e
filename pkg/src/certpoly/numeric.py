"""Exact scalars, sparse vectors stored as binary radix trees, and delta values.

Rationals come from a single backend chosen at import time: ``gmpy2.mpq`` when
gmpy2 is importable, :class:`fractions.Fraction` otherwise.  Setting the
environment variable ``CERTPOLY_RATIONAL=fraction`` forces the pure-Python
backend.  Both backends produce reduced fractions with a positive denominator
and hash/compare interchangeably.

A :class:`SparseVector` maps variable indices (naturals) to nonzero rationals.
Entries live in a persistent binary trie: the path from the root to the node
holding index ``k`` spells the binary digits of ``k``, least significant first,
and index 0 sits at the root.  Nodes are ``(value, child0, child1)`` tuples and
an empty subtree is ``None``.  No node stores a zero and no node is empty, so
two vectors that are equal as functions are equal as nested tuples.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Tuple, Union

_BACKEND = os.environ.get("CERTPOLY_RATIONAL", "gmpy2").lower()

if _BACKEND != "fraction":
    try:
        import gmpy2

        Q = gmpy2.mpq
        _gcd = gmpy2.gcd
        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - depends on environment
        Q = Fraction
        _gcd = math.gcd
        BACKEND = "fraction"
else:
    Q = Fraction
    _gcd = math.gcd
    BACKEND = "fraction"

ZERO = Q(0)
ONE = Q(1)

Rational = Union[int, Fraction, "gmpy2.mpq"]  # type: ignore[name-defined]


def parse_rational(text: str):
    """Parse ``p`` or ``p/q`` into a rational."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        den_i = int(den)
        if den_i == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Q(int(num), den_i)
    return Q(int(text))


def format_rational(q) -> str:
    q = Q(q)
    if q.denominator == 1:
        return str(int(q.numerator))
    return f"{int(q.numerator)}/{int(q.denominator)}"


# -- radix tree primitives -------------------------------------------------

Node = Optional[tuple]


def _mk(value, left: Node, right: Node) -> Node:
    if value is None and left is None and right is None:
        return None
    return (value, left, right)


def _get(node: Node, k: int):
    while node is not None:
        if k == 0:
            return node[0]
        node = node[2] if k & 1 else node[1]
        k >>= 1
    return None


def _set(node: Node, k: int, value) -> Node:
    """Return a tree with index ``k`` mapped to ``value`` (``None`` removes it)."""
    if node is None:
        if value is None:
            return None
        node = (None, None, None)
    if k == 0:
        return _mk(value, node[1], node[2])
    if k & 1:
        return _mk(node[0], node[1], _set(node[2], k >> 1, value))
    return _mk(node[0], _set(node[1], k >> 1, value), node[2])


def _add_scaled(a: Node, b: Node, k) -> Node:
    """Tree for ``a + k*b``; ``k`` is nonzero."""
    if b is None:
        return a
    if a is None:
        return _scale(b, k)
    av, bv = a[0], b[0]
    if bv is None:
        v = av
    elif av is None:
        v = bv * k
    else:
        v = av + bv * k
        if v == 0:
            v = None
    return _mk(v, _add_scaled(a[1], b[1], k), _add_scaled(a[2], b[2], k))


def _scale(node: Node, k) -> Node:
    if node is None:
        return None
    v = node[0]
    return (None if v is None else v * k, _scale(node[1], k), _scale(node[2], k))


def _walk(node: Node, key: int, depth: int, out: list) -> None:
    if node is None:
        return
    if node[0] is not None:
        out.append((key, node[0]))
    _walk(node[1], key, depth + 1, out)
    _walk(node[2], key | (1 << depth), depth + 1, out)


class SparseVector:
    """Immutable map from variable index to nonzero rational coefficient."""

    __slots__ = ("_root", "_items", "_hash")

    def __init__(self, root: Node = None):
        self._root = root
        self._items: Optional[Tuple[Tuple[int, object], ...]] = None
        self._hash: Optional[int] = None

    @classmethod
    def of(cls, mapping: Union[Mapping[int, object], Iterable[Tuple[int, object]], None] = None) -> "SparseVector":
        if mapping is None:
            return EMPTY
        pairs = mapping.items() if isinstance(mapping, Mapping) else mapping
        root: Node = None
        for k, v in pairs:
            if k < 0:
                raise ValueError(f"negative variable index {k}")
            v = Q(v)
            old = _get(root, k)
            if old is not None:
                v = v + old
            root = _set(root, k, v if v != 0 else None)
        return cls(root) if root is not None else EMPTY

    @classmethod
    def unit(cls, k: int, coef=1) -> "SparseVector":
        return cls.of({k: coef})

    # mapping protocol
    def items(self) -> Tuple[Tuple[int, object], ...]:
        """Entries sorted by increasing index."""
        if self._items is None:
            out: list = []
            _walk(self._root, 0, 0, out)
            out.sort(key=lambda kv: kv[0])
            self._items = tuple(out)
        return self._items

    def keys(self) -> Tuple[int, ...]:
        return tuple(k for k, _ in self.items())

    def get(self, k: int, default=ZERO):
        v = _get(self._root, k)
        return default if v is None else v

    def __getitem__(self, k: int):
        return self.get(k)

    def __contains__(self, k: int) -> bool:
        return _get(self._root, k) is not None

    def __iter__(self) -> Iterator[int]:
        return iter(self.keys())

    def __len__(self) -> int:
        return len(self.items())

    def __bool__(self) -> bool:
        return self._root is not None

    def lead(self) -> Tuple[int, object]:
        """Lowest-index entry."""
        return self.items()[0]

    # algebra
    def __add__(self, other: "SparseVector") -> "SparseVector":
        return vec_add(self, other)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self.add_scaled(other, -1)

    def __neg__(self) -> "SparseVector":
        return vec_scale(-1, self)

    def add_scaled(self, other: "SparseVector", k) -> "SparseVector":
        """``self + k*other``."""
        if k == 0 or other._root is None:
            return self
        return SparseVector(_add_scaled(self._root, other._root, Q(k)))

    def scale(self, k) -> "SparseVector":
        return vec_scale(k, self)

    def dot(self, point) -> object:
        return vec_dot(self, point)

    def without(self, k: int) -> "SparseVector":
        return SparseVector(_set(self._root, k, None))

    def rename(self, mapping: Mapping[int, int]) -> "SparseVector":
        return SparseVector.of((mapping.get(k, k), v) for k, v in self.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self._root == other._root

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.items())
        return self._hash

    def to_dict(self) -> dict:
        return dict(self.items())

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {format_rational(v)}" for k, v in self.items())
        return f"SparseVector({{{body}}})"


EMPTY = SparseVector(None)


def vec_add(u: SparseVector, v: SparseVector) -> SparseVector:
    if v._root is None:
        return u
    return SparseVector(_add_scaled(u._root, v._root, ONE))


def vec_scale(k, v: SparseVector) -> SparseVector:
    if k == 0 or v._root is None:
        return EMPTY
    if k == 1:
        return v
    return SparseVector(_scale(v._root, Q(k)))


def vec_dot(u: SparseVector, point) -> object:
    """Inner product; ``point`` is a SparseVector or a mapping index -> value."""
    total = ZERO
    if isinstance(point, SparseVector):
        for k, a in u.items():
            p = _get(point._root, k)
            if p is not None:
                total += a * p
    else:
        for k, a in u.items():
            p = point.get(k, 0)
            if p:
                total += a * p
    return total


def vec_gcd_normalize(v: SparseVector):
    """Split ``v`` into ``(w, g)`` with ``v == g*w``, ``g > 0`` and ``w`` primitive integral."""
    if not v:
        raise ValueError("cannot normalize the empty vector")
    num_gcd = 0
    den_lcm = 1
    for _, a in v.items():
        num_gcd = _gcd(num_gcd, a.numerator)
        d = a.denominator
        den_lcm = den_lcm * d // _gcd(den_lcm, d)
    g = Q(num_gcd, den_lcm)
    if g == 1:
        return v, ONE
    return vec_scale(1 / g, v), g


class DeltaValue:
    """``real + delta*d`` for a positive infinitesimal ``d``; ordered lexicographically."""

    __slots__ = ("real", "delta")

    def __init__(self, real=ZERO, delta=ZERO):
        self.real = real
        self.delta = delta

    def __add__(self, other: "DeltaValue") -> "DeltaValue":
        return DeltaValue(self.real + other.real, self.delta + other.delta)

    def __sub__(self, other: "DeltaValue") -> "DeltaValue":
        return DeltaValue(self.real - other.real, self.delta - other.delta)

    def __neg__(self) -> "DeltaValue":
        return DeltaValue(-self.real, -self.delta)

    def scale(self, k) -> "DeltaValue":
        return DeltaValue(self.real * k, self.delta * k)

    def __mul__(self, k) -> "DeltaValue":
        return self.scale(k)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "DeltaValue":
        return DeltaValue(self.real / k, self.delta / k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DeltaValue):
            return NotImplemented
        return self.real == other.real and self.delta == other.delta

    def __hash__(self) -> int:
        return hash((self.real, self.delta))

    def __lt__(self, other: "DeltaValue") -> bool:
        return self.real < other.real or (self.real == other.real and self.delta < other.delta)

    def __le__(self, other: "DeltaValue") -> bool:
        return self.real < other.real or (self.real == other.real and self.delta <= other.delta)

    def __gt__(self, other: "DeltaValue") -> bool:
        return other < self

    def __ge__(self, other: "DeltaValue") -> bool:
        return other <= self

    def instantiate(self, d):
        return self.real + self.delta * d

    def __repr__(self) -> str:
        if self.delta == 0:
            return f"DeltaValue({format_rational(self.real)})"
        return f"DeltaValue({format_rational(self.real)} + {format_rational(self.delta)}d)"


DZERO = DeltaValue(ZERO, ZERO)
