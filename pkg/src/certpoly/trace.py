"""Operation traces: text format, replay with timing and checks, generators.

One operation per line; ``#`` starts a comment::

    P := poly 2 { 1*x1 <= 1; 2*x0 + 1*x1 <= 2; -1*x0 + -1*x1 <= 1 }
    Q := project P x0
    R := join P Q
    S := assign R x0 := 1*x0 + 1; x1 := 1*x0
    W := widen P R
    incl P R true
    assert_eq R R

Names are defined once and referenced only after their definition.
"""

from __future__ import annotations

import json
import random
import re
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from certpoly import domain as D
from certpoly import oracles as O
from certpoly.checker import Value, check
from certpoly.constraint import (
    Cmp,
    Constraint,
    ParseError,
    format_linexpr,
    parse_constraint,
    parse_linexpr,
)
from certpoly.numeric import Q, SparseVector

# -- operations -----------------------------------------------------------------


@dataclass(frozen=True)
class Define:
    name: str
    nvars: int
    constraints: Tuple[Constraint, ...]


@dataclass(frozen=True)
class Meet:
    dst: str
    a: str
    b: str


@dataclass(frozen=True)
class Join:
    dst: str
    a: str
    b: str


@dataclass(frozen=True)
class Widen:
    dst: str
    a: str
    b: str


@dataclass(frozen=True)
class Project:
    dst: str
    a: str
    vars: Tuple[int, ...]


@dataclass(frozen=True)
class Assign:
    dst: str
    a: str
    # (variable, term, constant): x_var := term . x + constant
    assignments: Tuple[Tuple[int, SparseVector, object], ...]


@dataclass(frozen=True)
class Inclusion:
    a: str
    b: str
    expected: Optional[bool] = None


@dataclass(frozen=True)
class AssertEq:
    a: str
    b: str


TraceOp = Union[Define, Meet, Join, Widen, Project, Assign, Inclusion, AssertEq]
_BINARY = {"meet": Meet, "join": Join, "widen": Widen}


class TraceError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


# -- printing -------------------------------------------------------------------


def format_op(op: TraceOp) -> str:
    if isinstance(op, Define):
        body = "; ".join(str(c) for c in op.constraints)
        return f"{op.name} := poly {op.nvars} {{ {body} }}" if body else f"{op.name} := poly {op.nvars} {{ }}"
    for kw, cls in _BINARY.items():
        if isinstance(op, cls):
            return f"{op.dst} := {kw} {op.a} {op.b}"
    if isinstance(op, Project):
        return f"{op.dst} := project {op.a} " + " ".join(f"x{v}" for v in op.vars)
    if isinstance(op, Assign):
        parts = [f"x{v} := {format_linexpr(t, c)}" for v, t, c in op.assignments]
        return f"{op.dst} := assign {op.a} " + "; ".join(parts)
    if isinstance(op, Inclusion):
        tail = "" if op.expected is None else (" true" if op.expected else " false")
        return f"incl {op.a} {op.b}{tail}"
    if isinstance(op, AssertEq):
        return f"assert_eq {op.a} {op.b}"
    raise TypeError(f"not a trace op: {op!r}")


def format_trace(ops: Sequence[TraceOp]) -> str:
    return "".join(format_op(op) + "\n" for op in ops)


# -- parsing --------------------------------------------------------------------

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_DEF = re.compile(rf"^({_NAME})\s*:=\s*(\w+)\s*(.*)$")
_VAR = re.compile(r"^x(\d+)$")


def _var(tok: str, lineno: int) -> int:
    m = _VAR.match(tok)
    if not m:
        raise TraceError(lineno, f"expected a variable like x0, got {tok!r}")
    return int(m.group(1))


def parse(text: str) -> List[TraceOp]:
    ops: List[TraceOp] = []
    nvars: Dict[str, int] = {}

    def ref(name: str, lineno: int) -> int:
        if name not in nvars:
            raise TraceError(lineno, f"unknown name {name!r}")
        return nvars[name]

    def fresh(name: str, n: int, lineno: int) -> None:
        if name in nvars:
            raise TraceError(lineno, f"{name!r} is already defined")
        nvars[name] = n

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == "incl":
                if len(words) not in (3, 4) or (len(words) == 4 and words[3] not in ("true", "false")):
                    raise TraceError(lineno, "expected: incl A B [true|false]")
                ref(words[1], lineno)
                ref(words[2], lineno)
                exp = None if len(words) == 3 else words[3] == "true"
                ops.append(Inclusion(words[1], words[2], exp))
                continue
            if words[0] == "assert_eq":
                if len(words) != 3:
                    raise TraceError(lineno, "expected: assert_eq A B")
                ref(words[1], lineno)
                ref(words[2], lineno)
                ops.append(AssertEq(words[1], words[2]))
                continue
            m = _DEF.match(line)
            if not m:
                raise TraceError(lineno, f"cannot parse {line!r}")
            dst, kw, rest = m.groups()
            if kw == "poly":
                pm = re.match(r"^(\d+)\s*\{(.*)\}$", rest.strip())
                if not pm:
                    raise TraceError(lineno, "expected: NAME := poly N { c; c; ... }")
                n = int(pm.group(1))
                cons = []
                for chunk in pm.group(2).split(";"):
                    if chunk.strip():
                        c = parse_constraint(chunk)
                        if c.term and c.term.keys()[-1] >= n:
                            raise TraceError(lineno, f"variable index out of range in {chunk.strip()!r}")
                        cons.append(c)
                fresh(dst, n, lineno)
                ops.append(Define(dst, n, tuple(cons)))
            elif kw in _BINARY:
                args = rest.split()
                if len(args) != 2:
                    raise TraceError(lineno, f"expected: NAME := {kw} A B")
                n = max(ref(args[0], lineno), ref(args[1], lineno))
                fresh(dst, n, lineno)
                ops.append(_BINARY[kw](dst, args[0], args[1]))
            elif kw == "project":
                args = rest.split()
                if len(args) < 2:
                    raise TraceError(lineno, "expected: NAME := project A x.. (at least one variable)")
                n = ref(args[0], lineno)
                vs = tuple(_var(t, lineno) for t in args[1:])
                if any(v >= n for v in vs):
                    raise TraceError(lineno, "variable index out of range")
                fresh(dst, n, lineno)
                ops.append(Project(dst, args[0], vs))
            elif kw == "assign":
                parts = rest.split(None, 1)
                if len(parts) != 2:
                    raise TraceError(lineno, "expected: NAME := assign A x.. := expr; ...")
                n = ref(parts[0], lineno)
                asg = []
                for chunk in parts[1].split(";"):
                    if not chunk.strip():
                        continue
                    lhs, sep, rhs = chunk.partition(":=")
                    if not sep:
                        raise TraceError(lineno, f"missing ':=' in {chunk.strip()!r}")
                    v = _var(lhs.strip(), lineno)
                    term, const = parse_linexpr(rhs)
                    if v >= n or (term and term.keys()[-1] >= n):
                        raise TraceError(lineno, "variable index out of range")
                    asg.append((v, term, const))
                if not asg:
                    raise TraceError(lineno, "empty assignment")
                fresh(dst, n, lineno)
                ops.append(Assign(dst, parts[0], tuple(asg)))
            else:
                raise TraceError(lineno, f"unknown operation {kw!r}")
        except ParseError as exc:
            raise TraceError(lineno, str(exc)) from None
    return ops


# -- replay ---------------------------------------------------------------------

BUCKETS: Tuple[Tuple[int, Optional[int]], ...] = (
    (0, 1),
    (2, 5),
    (6, 10),
    (11, 15),
    (16, 20),
    (21, 25),
    (26, 30),
    (31, None),
)


def bucket_label(size: int) -> str:
    for lo, hi in BUCKETS:
        if size >= lo and (hi is None or size <= hi):
            return f"{lo}+" if hi is None else f"{lo}-{hi}"
    raise ValueError(f"negative size {size}")


@dataclass
class ReplayOptions:
    check_certs: bool = False
    oracle: bool = False
    oracle_max_vars: int = 4


@dataclass
class OpRecord:
    index: int
    op: str
    size: int
    seconds: float
    eqs: int = 0
    ineqs: int = 0
    bot: bool = False
    certs: int = 0
    certs_ok: int = 0
    oracle: Optional[str] = None  # "ok", "mismatch", "skipped"
    answer: Optional[bool] = None

    @property
    def trivial(self) -> bool:
        return self.size <= 1


@dataclass
class RunReport:
    records: List[OpRecord] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)
    notices: List[str] = field(default_factory=list)
    values: Dict[str, D.Polyhedron] = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return not self.failures

    def nontrivial(self) -> List[OpRecord]:
        return [r for r in self.records if not r.trivial]

    def buckets(self) -> Dict[str, Dict[str, dict]]:
        """Per operation and size bucket: count, total and median seconds."""
        table: Dict[str, Dict[str, List[float]]] = {}
        for r in self.records:
            table.setdefault(r.op, {}).setdefault(bucket_label(r.size), []).append(r.seconds)
        out: Dict[str, Dict[str, dict]] = {}
        for op, rows in table.items():
            out[op] = {}
            for lo, hi in BUCKETS:
                label = bucket_label(lo)
                ts = rows.get(label, [])
                out[op][label] = {
                    "count": len(ts),
                    "total": sum(ts),
                    "median": statistics.median(ts) if ts else None,
                }
        return out

    def totals(self) -> Dict[str, dict]:
        """Per operation totals, trivial problems (size 0 or 1) excluded."""
        out: Dict[str, dict] = {}
        for r in self.nontrivial():
            t = out.setdefault(r.op, {"count": 0, "total": 0.0})
            t["count"] += 1
            t["total"] += r.seconds
        for op, t in out.items():
            ts = [r.seconds for r in self.nontrivial() if r.op == op]
            t["median"] = statistics.median(ts)
        return out

    def summary(self) -> dict:
        certs = sum(r.certs for r in self.records)
        ok = sum(r.certs_ok for r in self.records)
        oracle = [r.oracle for r in self.records if r.oracle is not None]
        return {
            "ops": len(self.records),
            "trivial": sum(r.trivial for r in self.records),
            "certificates": {"checked": certs, "accepted": ok},
            "oracle": {k: oracle.count(k) for k in ("ok", "mismatch", "skipped")},
            "failures": list(self.failures),
        }

    def to_json(self) -> str:
        return json.dumps(
            {
                "summary": self.summary(),
                "totals": self.totals(),
                "buckets": self.buckets(),
                "records": [asdict(r) | {"trivial": r.trivial} for r in self.records],
                "notices": self.notices,
            },
            indent=2,
        )

    def format_table(self) -> str:
        """Plain-text per-bucket table (milliseconds)."""
        labels = [bucket_label(lo) for lo, _ in BUCKETS]
        lines = ["op        " + "".join(f"{lb:>14}" for lb in labels)]
        for op, rows in sorted(self.buckets().items()):
            cells = []
            for lb in labels:
                cell = rows[lb]
                cells.append(f"{cell['count']:>5} {cell['median'] * 1e3:>7.2f}ms" if cell["count"] else f"{'-':>14}")
            lines.append(f"{op:<10}" + "".join(f"{c:>14}" for c in cells))
        return "\n".join(lines)


class ReplayAbort(RuntimeError):
    def __init__(self, index: int, op: TraceOp, msg: str):
        super().__init__(f"op {index + 1} ({format_op(op)}): {msg}")
        self.index = index


_BOT = [Constraint(SparseVector.of({}), Cmp.LE, Q(-1))]


def _cs(p: D.Polyhedron) -> List[Constraint]:
    return _BOT if p.is_bot else p.constraints()


def _oracle_assign(p: D.Polyhedron, assignments, n: int) -> List[Constraint]:
    """Fresh variable per assigned one, naive projection, rename back."""
    fresh = {v: n + i for i, (v, _, _) in enumerate(assignments)}
    cs = list(_cs(p))
    for v, t, c in assignments:
        cs.append(Constraint(SparseVector.unit(fresh[v]) - t, Cmp.EQ, Q(c)))
    out = O.fm_project(cs, [v for v, _, _ in assignments])
    back = {f: v for v, f in fresh.items()}
    return [Constraint(c.term.rename(back), c.cmp, c.bound) for c in out]


def _oracle_verdict(op: TraceOp, env: Dict[str, D.Polyhedron], result, n: int) -> bool:
    if isinstance(op, Define):
        return O.equivalent(_cs(result), list(op.constraints), n)
    if isinstance(op, Meet):
        return O.equivalent(_cs(result), _cs(env[op.a]) + _cs(env[op.b]), n)
    if isinstance(op, Project):
        return O.equivalent(_cs(result), O.fm_project(_cs(env[op.a]), op.vars), n)
    if isinstance(op, Assign):
        return O.equivalent(_cs(result), _oracle_assign(env[op.a], op.assignments, n), n)
    if isinstance(op, Join):
        a, b = _cs(env[op.a]), _cs(env[op.b])
        upper = O.included(a, _cs(result), n) and O.included(b, _cs(result), n)
        plain = all(c.cmp is not Cmp.LT for c in a + b)
        if upper and plain and O.bounded(a, n) and O.bounded(b, n):
            pts = O.vertices(a, n) + O.vertices(b, n)
            return O.equivalent(_cs(result), O.hull(pts, n), n)
        return upper
    if isinstance(op, Widen):
        return O.included(_cs(env[op.a]), _cs(result), n) and O.included(_cs(env[op.b]), _cs(result), n)
    if isinstance(op, Inclusion):
        return O.included(_cs(env[op.a]), _cs(env[op.b]), n) == result
    return True


def replay(ops: Sequence[TraceOp], options: Optional[ReplayOptions] = None) -> RunReport:
    options = options or ReplayOptions()
    report = RunReport()
    env = report.values
    skipped_notice = False
    for index, op in enumerate(ops):
        certs = ()
        result = None
        if isinstance(op, Define):
            size = len(op.constraints)
            t0 = time.perf_counter()
            res = D.minimize_flat(op.nvars, tuple(enumerate(op.constraints)), "poly")
            dt = time.perf_counter() - t0
            result, certs, kind, dst = res.value, res.certs, "poly", op.name
        elif isinstance(op, AssertEq):
            a, b = env[op.a], env[op.b]
            if D.incl(a, b) is None or D.incl(b, a) is None:
                raise ReplayAbort(index, op, "operands differ")
            continue
        elif isinstance(op, Inclusion):
            a, b = env[op.a], env[op.b]
            size = a.size + b.size
            t0 = time.perf_counter()
            cert = D.incl(a, b)
            dt = time.perf_counter() - t0
            result, kind, dst = cert is not None, "incl", None
            if cert is not None:
                certs = (D.Obligation("incl", a.flat(), b.flat(), cert),)
            if op.expected is not None and op.expected != result:
                raise ReplayAbort(index, op, f"inclusion is {str(result).lower()}")
        else:
            a = env[op.a]
            if isinstance(op, (Meet, Join, Widen)):
                b = env[op.b]
                size = a.size + b.size
                fn = {Meet: D.meet, Join: D.join, Widen: D.widen}[type(op)]
                t0 = time.perf_counter()
                res = fn(a, b)
                dt = time.perf_counter() - t0
            elif isinstance(op, Project):
                size = a.size
                t0 = time.perf_counter()
                res = D.project(a, op.vars)
                dt = time.perf_counter() - t0
            else:
                size = a.size
                t0 = time.perf_counter()
                res = D.assign(a, op.assignments)
                dt = time.perf_counter() - t0
            if isinstance(res, D.CertifiedResult):
                result, certs = res.value, res.certs
            else:
                result = res
            kind, dst = type(op).__name__.lower(), op.dst
        rec = OpRecord(index, kind, size, dt)
        if isinstance(result, D.Polyhedron):
            rec.eqs, rec.ineqs, rec.bot = len(result.eqs), len(result.ineqs), result.is_bot
        else:
            rec.answer = result
        if options.check_certs:
            for ob in certs:
                rec.certs += 1
                outcome = check(ob.lhs, ob.rhs, ob.cert)
                if isinstance(outcome, Value):
                    rec.certs_ok += 1
                else:
                    report.failures.append(f"op {index + 1} ({format_op(op)}): certificate rejected: {outcome.reason}")
        if options.oracle:
            n = _op_nvars(op, env, result)
            if n > options.oracle_max_vars:
                rec.oracle = "skipped"
                if not skipped_notice:
                    report.notices.append(f"oracle skipped for operations over more than {options.oracle_max_vars} variables")
                    skipped_notice = True
            else:
                good = _oracle_verdict(op, env, result, n)
                rec.oracle = "ok" if good else "mismatch"
                if not good:
                    report.failures.append(f"op {index + 1} ({format_op(op)}): oracle mismatch")
        report.records.append(rec)
        if dst is not None:
            env[dst] = result
    return report


def _op_nvars(op: TraceOp, env, result) -> int:
    if isinstance(op, Define):
        return op.nvars
    ns = [env[op.a].nvars]
    if hasattr(op, "b"):
        ns.append(env[op.b].nvars)
    if isinstance(result, D.Polyhedron):
        ns.append(result.nvars)
    return max(ns)


# -- generators -----------------------------------------------------------------

PROFILES = ("box", "octagonal", "loop-chain")


def _c(term: Dict[int, int], cmp: Cmp, bound) -> Constraint:
    return Constraint.of(term, cmp, bound)


def _box_ops(rng: random.Random) -> List[TraceOp]:
    ops: List[TraceOp] = []
    names: List[str] = []
    n = rng.randint(2, 4)
    for i in range(rng.randint(4, 7)):
        cons = []
        for v in range(n):
            lo = rng.randint(-10, 5)
            hi = lo + rng.randint(0, 8)
            cons.append(_c({v: 1}, Cmp.LE, hi))
            cons.append(_c({v: -1}, Cmp.LE, -lo))
        name = f"B{i}"
        ops.append(Define(name, n, tuple(cons)))
        names.append(name)
    for i in range(rng.randint(6, 12)):
        a, b = rng.sample(names, 2)
        kind = rng.choice(["meet", "join", "join", "project", "incl"])
        dst = f"R{i}"
        if kind == "meet":
            ops.append(Meet(dst, a, b))
        elif kind == "join":
            ops.append(Join(dst, a, b))
            ops.append(Inclusion(a, dst, True))
        elif kind == "project":
            ops.append(Project(dst, a, (rng.randrange(n),)))
        else:
            ops.append(Inclusion(a, b))
            continue
        names.append(dst)
    ops.append(Join("Self", names[0], names[0]))
    ops.append(AssertEq("Self", names[0]))
    return ops


def _octagonal_ops(rng: random.Random) -> List[TraceOp]:
    ops: List[TraceOp] = []
    names: List[str] = []
    n = rng.randint(2, 4)
    for i in range(rng.randint(3, 6)):
        cons = []
        for _ in range(rng.randint(3, 8)):
            v = rng.randrange(n)
            w = rng.randrange(n)
            term = {v: rng.choice((-1, 1))}
            if w != v and rng.random() < 0.7:
                term[w] = rng.choice((-1, 1))
            cons.append(_c(term, Cmp.LE, rng.randint(0, 12)))
        name = f"O{i}"
        ops.append(Define(name, n, tuple(cons)))
        names.append(name)
    for i in range(rng.randint(6, 12)):
        a, b = rng.sample(names, 2)
        kind = rng.choice(["meet", "join", "project", "widen"])
        dst = f"R{i}"
        if kind == "meet":
            ops.append(Meet(dst, a, b))
        elif kind == "join":
            ops.append(Join(dst, a, b))
        elif kind == "widen":
            ops.append(Widen(dst, a, b))
        else:
            vs = tuple(sorted(rng.sample(range(n), rng.randint(1, n - 1))))
            ops.append(Project(dst, a, vs))
        names.append(dst)
    return ops


def _loop_chain_ops(rng: random.Random) -> List[TraceOp]:
    """Abstract iteration of ``x0 = 0; x1 = c; while (x0 <= N) { x0 += 1; x1 += k }``."""
    n = 2
    limit = rng.randint(3, 20)
    step = rng.randint(-3, 3)
    start = rng.randint(-5, 5)
    ops: List[TraceOp] = [
        Define("Init", n, (_c({0: 1}, Cmp.EQ, 0), _c({1: 1}, Cmp.EQ, start))),
        Define("Guard", n, (_c({0: 1}, Cmp.LE, limit),)),
        Define("Exit", n, (_c({0: -1}, Cmp.LT, -limit),)),
    ]
    env = {"Init": D.from_constraints(n, ops[0].constraints).value}
    guard = D.from_constraints(n, ops[1].constraints).value
    inv = "Init"
    body = (
        (0, SparseVector.unit(0), Q(1)),
        (1, SparseVector.unit(1), Q(step)),
    )
    for k in range(1, 12):
        b, t, j, w = f"B{k}", f"T{k}", f"J{k}", f"W{k}"
        ops.append(Meet(b, inv, "Guard"))
        env[b] = D.meet(env[inv], guard).value
        ops.append(Assign(t, b, body))
        env[t] = D.assign(env[b], body).value
        ops.append(Join(j, "Init", t))
        env[j] = D.join(env["Init"], env[t]).value
        stable = D.incl(env[j], env[inv]) is not None
        ops.append(Inclusion(j, inv, stable))
        if stable:
            break
        ops.append(Widen(w, inv, j) if k > 2 else Join(w, inv, j))
        env[w] = D.widen(env[inv], env[j]) if k > 2 else D.join(env[inv], env[j]).value
        inv = w
    ops.append(Meet("Post", inv, "Exit"))
    return ops


def gen(seed: int, profile: str) -> str:
    """Deterministic synthetic trace for ``seed`` and ``profile``."""
    rng = random.Random(seed)
    if profile == "box":
        ops = _box_ops(rng)
    elif profile == "octagonal":
        ops = _octagonal_ops(rng)
    elif profile == "loop-chain":
        ops = _loop_chain_ops(rng)
    else:
        raise ValueError(f"unknown profile {profile!r} (expected one of {', '.join(PROFILES)})")
    header = f"# synthetic trace: profile {profile}, seed {seed}\n"
    return header + format_trace(ops)
