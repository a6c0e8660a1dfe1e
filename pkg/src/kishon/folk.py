"""Finite two-sorted first-order structures and their satisfaction relation.

Structures have an Event sort (a finite tuple of labels) and a Data sort (a
bounded integer interval standing in for the naturals plus -1). The language
has unary event predicates, the precedence relation ``<`` on events, event
equality, the function ``Val: Event -> Data`` and named Data constants.
Quantifiers range over events only.

Evaluation is tensorised: each bound event variable owns one numpy axis, an
atom becomes a boolean array broadcast over the axes of the variables it
mentions, and a quantifier reduces its axis with ``all``/``any``.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .orders import Precedence, is_russell_wiener, is_strict_partial_order


class EvaluationError(Exception):
    """Raised for unbound variables or symbols missing from the structure."""


# --------------------------------------------------------------------------
# Structures
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    event_predicates: frozenset[str]
    has_precedence: bool = True
    data_constants: frozenset[str] = frozenset()


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    events: tuple[str, ...] = ()
    data_universe: tuple[int, ...] = (-1, 0)
    predicates: Mapping[str, frozenset[str]] = field(default_factory=dict)
    precedence: frozenset[tuple[str, str]] = frozenset()
    val: Mapping[str, int] = field(default_factory=dict)
    constants: Mapping[str, int] = field(default_factory=dict)

    @property
    def signature(self) -> Signature:
        return Signature(frozenset(self.predicates), True, frozenset(self.constants))

    @cached_property
    def index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.events)}

    @cached_property
    def order(self) -> Precedence:
        ix = self.index
        return Precedence(len(self.events), frozenset((ix[a], ix[b]) for a, b in self.precedence))

    @cached_property
    def _prec(self) -> np.ndarray:
        return self.order.matrix

    @cached_property
    def _vals(self) -> np.ndarray:
        return np.array([self.val[e] for e in self.events], dtype=np.int64)

    @cached_property
    def _masks(self) -> dict[str, np.ndarray]:
        ix = self.index
        out = {}
        for name, members in self.predicates.items():
            m = np.zeros(len(self.events), dtype=bool)
            for e in members:
                m[ix[e]] = True
            out[name] = m
        return out

    def precedes(self, a: str, b: str) -> bool:
        return (a, b) in self.precedence

    def holds(self, predicate: str, e: str) -> bool:
        return e in self.predicates.get(predicate, ())

    def reduct(self, events: Iterable[str], predicates: Iterable[str] | None = None,
               constants: Iterable[str] | None = None) -> "FiniteStructure":
        """Restrict to a subset of events (kept in original order) and optionally of symbols."""
        keep = set(events)
        evs = tuple(e for e in self.events if e in keep)
        preds = self.predicates if predicates is None else {p: self.predicates[p] for p in predicates}
        consts = self.constants if constants is None else {c: self.constants[c] for c in constants}
        return FiniteStructure(
            events=evs,
            data_universe=self.data_universe,
            predicates={p: frozenset(m & keep) for p, m in preds.items()},
            precedence=frozenset((a, b) for a, b in self.precedence if a in keep and b in keep),
            val={e: self.val[e] for e in evs},
            constants=dict(consts),
        )

    def canonical(self) -> tuple:
        return (
            tuple(sorted(self.events)),
            tuple(sorted((p, tuple(sorted(m))) for p, m in self.predicates.items())),
            tuple(sorted(self.precedence)),
            tuple(sorted(self.val.items())),
            tuple(sorted(self.constants.items())),
            self.data_universe,
        )

    def __eq__(self, other):
        if not isinstance(other, FiniteStructure):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def to_json(self) -> dict:
        return {
            "events": sorted(self.events),
            "data_universe": [min(self.data_universe), max(self.data_universe)] if self.data_universe else [],
            "predicates": {p: sorted(m) for p, m in sorted(self.predicates.items())},
            "precedence": [list(pair) for pair in sorted(self.precedence)],
            "val": {e: self.val[e] for e in sorted(self.val)},
            "constants": {c: self.constants[c] for c in sorted(self.constants)},
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "FiniteStructure":
        lo, hi = d["data_universe"] if d.get("data_universe") else (0, -1)
        return cls(
            events=tuple(d["events"]),
            data_universe=tuple(range(lo, hi + 1)),
            predicates={p: frozenset(m) for p, m in d["predicates"].items()},
            precedence=frozenset(tuple(pair) for pair in d["precedence"]),
            val=dict(d["val"]),
            constants=dict(d["constants"]),
        )


def data_universe(bound: int) -> tuple[int, ...]:
    """The Data sort truncated at ``bound``: ``{-1, 0, ..., bound}``."""
    return tuple(range(-1, bound + 1))


def check_structure(s: FiniteStructure) -> list[str]:
    """Invariant violations of ``s``; an empty list means valid."""
    problems = []
    events = set(s.events)
    if len(events) != len(s.events):
        problems.append("events not distinct")
    for name, members in s.predicates.items():
        stray = set(members) - events
        if stray:
            problems.append(f"predicate {name} holds of non-events {sorted(stray)}")
    for a, b in s.precedence:
        if a not in events or b not in events:
            problems.append(f"precedence pair {(a, b)} relates non-events")
    missing = events - set(s.val)
    if missing:
        problems.append(f"val not total: missing {sorted(missing)}")
    stray = set(s.val) - events
    if stray:
        problems.append(f"val defined on non-events {sorted(stray)}")
    universe = set(s.data_universe)
    for e, v in s.val.items():
        if v not in universe:
            problems.append(f"val({e})={v} outside the Data universe")
    for c, v in s.constants.items():
        if v not in universe:
            problems.append(f"constant {c}={v} outside the Data universe")
    return problems


def is_system_execution(s: FiniteStructure) -> bool:
    """Precedence is a strict partial order with the Russell-Wiener property."""
    p = s.order
    return is_strict_partial_order(p) and is_russell_wiener(p)


# --------------------------------------------------------------------------
# Formulas
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ValOf:
    var: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Lit:
    value: int


Term = Union[ValOf, Const, Lit]


@dataclass(frozen=True)
class Pred:
    name: str
    var: str


@dataclass(frozen=True)
class Prec:
    left: str
    right: str


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class DataCmp:
    op: str
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class And:
    args: tuple["FOFormula", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["FOFormula", ...]


@dataclass(frozen=True)
class Not:
    arg: "FOFormula"


@dataclass(frozen=True)
class Implies:
    hyp: "FOFormula"
    concl: "FOFormula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "FOFormula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "FOFormula"


FOFormula = Union[Pred, Prec, Eq, DataCmp, And, Or, Not, Implies, Forall, Exists]

TRUE = And(())
FALSE = Or(())

_OPS = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


def conj(*fs: FOFormula) -> FOFormula:
    return fs[0] if len(fs) == 1 else And(tuple(fs))


def disj(*fs: FOFormula) -> FOFormula:
    return fs[0] if len(fs) == 1 else Or(tuple(fs))


def forall(vars: str | Sequence[str], body: FOFormula) -> FOFormula:
    for v in reversed(vars.split() if isinstance(vars, str) else vars):
        body = Forall(v, body)
    return body


def exists(vars: str | Sequence[str], body: FOFormula) -> FOFormula:
    for v in reversed(vars.split() if isinstance(vars, str) else vars):
        body = Exists(v, body)
    return body


def concurrent(a: str, b: str) -> FOFormula:
    return Not(Or((Prec(a, b), Prec(b, a))))


def val_cmp(a: str, op: str, other: Union[str, int, Term]) -> FOFormula:
    """``Val(a) op X`` where X is another event variable, an int literal or a term."""
    if isinstance(other, str):
        other = ValOf(other)
    elif isinstance(other, int):
        other = Lit(other)
    return DataCmp(op, ValOf(a), other)


def free_variables(f: FOFormula) -> frozenset[str]:
    if isinstance(f, Pred):
        return frozenset({f.var})
    if isinstance(f, (Prec, Eq)):
        return frozenset({f.left, f.right})
    if isinstance(f, DataCmp):
        return frozenset(t.var for t in (f.lhs, f.rhs) if isinstance(t, ValOf))
    if isinstance(f, (And, Or)):
        return frozenset().union(*(free_variables(a) for a in f.args))
    if isinstance(f, Not):
        return free_variables(f.arg)
    if isinstance(f, Implies):
        return free_variables(f.hyp) | free_variables(f.concl)
    if isinstance(f, (Forall, Exists)):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def evaluate(s: FiniteStructure, f: FOFormula, env: Mapping[str, str] | None = None) -> bool:
    """Tarskian satisfaction ``s |= f[env]``; ``env`` maps event variables to events."""
    bound = {}
    for var, e in (env or {}).items():
        try:
            bound[var] = s.index[e]
        except KeyError:
            raise EvaluationError(f"{var} is assigned {e!r}, which is not an event") from None
    return bool(_Evaluator(s, bound).run(f, {}, 0))


class _Evaluator:
    def __init__(self, s: FiniteStructure, env: dict[str, int]):
        self.s = s
        self.n = len(s.events)
        self.env = env

    def _axis(self, vec: np.ndarray, var: str, axes: dict[str, int], depth: int):
        if var in axes:
            shape = [1] * depth
            shape[axes[var]] = self.n
            return vec.reshape(shape)
        if var in self.env:
            return vec[self.env[var]]
        raise EvaluationError(f"unbound variable {var}")

    def _pair(self, mat: np.ndarray, a: str, b: str, axes, depth):
        if a in axes and b in axes:
            ia, ib = axes[a], axes[b]
            if ia == ib:
                return self._axis(mat.diagonal().copy(), a, axes, depth)
            shape = [1] * depth
            shape[ia] = shape[ib] = self.n
            return (mat if ia < ib else mat.T).reshape(shape)
        if a in axes:
            return self._axis(mat[:, self._fixed(b)], a, axes, depth)
        if b in axes:
            return self._axis(mat[self._fixed(a), :], b, axes, depth)
        return mat[self._fixed(a), self._fixed(b)]

    def _fixed(self, var: str) -> int:
        try:
            return self.env[var]
        except KeyError:
            raise EvaluationError(f"unbound variable {var}") from None

    def _term(self, t: Term, axes, depth):
        if isinstance(t, ValOf):
            return self._axis(self.s._vals, t.var, axes, depth)
        if isinstance(t, Const):
            try:
                return self.s.constants[t.name]
            except KeyError:
                raise EvaluationError(f"constant {t.name} not in structure") from None
        if isinstance(t, Lit):
            return t.value
        raise TypeError(f"not a term: {t!r}")

    def run(self, f: FOFormula, axes: dict[str, int], depth: int):
        if isinstance(f, Pred):
            try:
                mask = self.s._masks[f.name]
            except KeyError:
                raise EvaluationError(f"predicate {f.name} not in signature") from None
            return self._axis(mask, f.var, axes, depth)
        if isinstance(f, Prec):
            return self._pair(self.s._prec, f.left, f.right, axes, depth)
        if isinstance(f, Eq):
            return self._pair(np.eye(self.n, dtype=bool), f.left, f.right, axes, depth)
        if isinstance(f, DataCmp):
            return _OPS[f.op](self._term(f.lhs, axes, depth), self._term(f.rhs, axes, depth))
        if isinstance(f, And):
            acc = True
            for a in f.args:
                acc = np.logical_and(acc, self.run(a, axes, depth))
            return acc
        if isinstance(f, Or):
            acc = False
            for a in f.args:
                acc = np.logical_or(acc, self.run(a, axes, depth))
            return acc
        if isinstance(f, Not):
            return np.logical_not(self.run(f.arg, axes, depth))
        if isinstance(f, Implies):
            return np.logical_or(np.logical_not(self.run(f.hyp, axes, depth)), self.run(f.concl, axes, depth))
        if isinstance(f, (Forall, Exists)):
            universal = isinstance(f, Forall)
            if self.n == 0:
                return universal
            inner = {**axes, f.var: depth}
            body = np.asarray(self.run(f.body, inner, depth + 1))
            if body.ndim == 0:
                return body
            return body.all(axis=depth) if universal else body.any(axis=depth)
        raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# Library sentences
# --------------------------------------------------------------------------


def irreflexive_sentence() -> FOFormula:
    return Forall("a", Not(Prec("a", "a")))


def strict_partial_order_sentence() -> FOFormula:
    return conj(
        irreflexive_sentence(),
        forall("a b c", Implies(And((Prec("a", "b"), Prec("b", "c"))), Prec("a", "c"))),
    )


def russell_wiener_sentence() -> FOFormula:
    """For all a,b,c,d: a<b, c<d and not c<b imply a<d."""
    return forall(
        "a b c d",
        Implies(And((Prec("a", "b"), Prec("c", "d"), Not(Prec("c", "b")))), Prec("a", "d")),
    )


def regularity_sentence(read: str, write: str, writer: str, initial: str) -> FOFormula:
    """Single-writer regular register: writer serial and sole writer, no event both
    read and write, and every read returns a concurrent write's value, the last
    preceding write's value, or (with no preceding write) the initial value."""
    serial_writer = forall(
        "a b",
        Implies(And((Pred(writer, "a"), Pred(writer, "b"))), Or((Prec("a", "b"), Eq("a", "b"), Prec("b", "a")))),
    )
    writes_by_writer = Forall("a", Implies(Pred(write, "a"), Pred(writer, "a")))
    disjoint = Not(Exists("a", And((Pred(write, "a"), Pred(read, "a")))))
    concurrent_write = Exists("w", And((Pred(write, "w"), val_cmp("r", "=", "w"), concurrent("w", "r"))))
    last_write = Exists(
        "w",
        And((
            Pred(write, "w"),
            val_cmp("r", "=", "w"),
            Prec("w", "r"),
            Not(Exists("x", And((Pred(write, "x"), Prec("w", "x"), Prec("x", "r"))))),
        )),
    )
    initial_value = And((
        Not(Exists("w", And((Pred(write, "w"), Prec("w", "r"))))),
        DataCmp("=", ValOf("r"), Const(initial)),
    ))
    reads = Forall("r", Implies(Pred(read, "r"), Or((concurrent_write, last_write, initial_value))))
    return conj(serial_writer, writes_by_writer, disjoint, reads)
