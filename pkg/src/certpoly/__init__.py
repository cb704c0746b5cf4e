"""Constraints-only convex polyhedra over exact rationals, with Farkas certificates.

Every operator of the domain returns, along with its result, certificates that
an independent checker (:mod:`certpoly.checker`) can verify using nothing more
than linear combinations and comparisons.
"""

from certpoly.numeric import Q, SparseVector, DeltaValue
from certpoly.constraint import Cmp, Constraint
from certpoly.certificate import Cert, Incl, Empty
from certpoly.domain import (
    Polyhedron,
    CertifiedResult,
    Obligation,
    top,
    from_constraints,
    incl,
    meet,
    minimize,
    project,
    assign,
    join,
    widen,
)
from certpoly.checker import check, Value, Error

__all__ = [
    "Q",
    "SparseVector",
    "DeltaValue",
    "Cmp",
    "Constraint",
    "Cert",
    "Incl",
    "Empty",
    "Polyhedron",
    "CertifiedResult",
    "Obligation",
    "top",
    "from_constraints",
    "incl",
    "meet",
    "minimize",
    "project",
    "assign",
    "join",
    "widen",
    "check",
    "Value",
    "Error",
]
