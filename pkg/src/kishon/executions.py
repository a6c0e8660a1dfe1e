"""Restricted system executions: both processes plus a register specification.

An execution has eight events ``a_1..a_4`` (process 0) and ``b_1..b_4``
(process 1) with an interval-order precedence extending both chains. Its
degrees of freedom are the order, the two picked numbers, and the values the
two reads return; the register semantics decides which read values are
allowed, and the return values then follow from the line-4 rule.

Event indices used throughout: ``a_k -> k-1`` and ``b_k -> k+3``.
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from . import folk
from .folk import FiniteStructure, Forall, Not, Or, Pred, And, Exists, data_universe
from .nonrestricted import event_label, process_predicates, satisfies_run_properties
from .orders import Precedence, enumerate_two_chain_orders, is_russell_wiener
from .protocol import decision, eval_expression
from .verdict import Verdict

EVENTS = tuple(event_label(i, k) for i in (0, 1) for k in range(1, 5))
A1, A2, A3, A4, B1, B2, B3, B4 = range(8)


class RegisterSemantics(str, enum.Enum):
    SERIAL = "serial"
    REGULAR = "regular"
    SAFE = "safe"


class SerialityViolation(ValueError):
    """A read is concurrent with a write, so the register cannot be serial."""


def allowed_read_values(r: int, order: Precedence, writes: Iterable[tuple[int, int]], initial: int,
                        sem: RegisterSemantics | str, bound: int) -> frozenset[int]:
    """Values read ``r`` may return given the writes ``(event, value)`` on its register.

    Regular: the last preceding write's value (the initial value if no write
    precedes) together with every concurrent write's value. Serial: only the
    former, and no write may be concurrent. Safe: serial unless a write is
    concurrent, in which case any value of ``0..bound``.
    """
    sem = RegisterSemantics(sem)
    writes = list(writes)
    before = [(w, x) for w, x in writes if order.precedes(w, r)]
    overlapping = [(w, x) for w, x in writes if order.concurrent(w, r)]
    last = {x for w, x in before if not any(order.precedes(w, w2) and order.precedes(w2, r) for w2, _ in before)}
    settled = last if before else {initial}
    if sem is RegisterSemantics.REGULAR:
        return frozenset(settled | {x for _, x in overlapping})
    if overlapping:
        if sem is RegisterSemantics.SERIAL:
            raise SerialityViolation(f"read {r} is concurrent with write(s) {[w for w, _ in overlapping]}")
        return frozenset(range(0, bound + 1))
    return frozenset(settled)


def return_value(read: int, picked: int) -> int:
    return int(eval_expression(decision("v", "n"), {"v": read, "n": picked}))


@dataclass(frozen=True)
class SystemExecution:
    order: Precedence
    values: tuple[int, ...]
    bound: int

    def val(self, label: str) -> int:
        return self.values[EVENTS.index(label)]

    @property
    def picks(self) -> tuple[int, int]:
        return self.values[A1], self.values[B1]

    @property
    def returns(self) -> tuple[int, int]:
        return self.values[A4], self.values[B4]

    @property
    def reads(self) -> tuple[int, int]:
        return self.values[A3], self.values[B3]

    def key(self) -> tuple:
        return self.order.canonical(), self.values

    @cached_property
    def structure(self) -> FiniteStructure:
        preds: dict[str, set[str]] = {}
        for i in (0, 1):
            roles = process_predicates(i)
            mine = EVENTS[4 * i: 4 * i + 4]
            preds[roles["process"]] = set(mine)
            for role, e in zip(("assign", "write", "read", "return"), mine):
                preds[roles[role]] = {e}
        return FiniteStructure(
            events=EVENTS,
            data_universe=data_universe(self.bound),
            predicates={k: frozenset(v) for k, v in preds.items()},
            precedence=frozenset((EVENTS[i], EVENTS[j]) for i, j in self.order.pairs),
            val=dict(zip(EVENTS, self.values)),
            constants={"d_R_0": 0, "d_R_1": 0},
        )

    def to_json(self) -> dict:
        return self.structure.to_json()


def build_execution(order: Precedence, n0: int, n1: int, r0: int, r1: int, bound: int) -> SystemExecution:
    """Execution with picks ``n0, n1`` where ``a_3`` reads ``r0`` and ``b_3`` reads ``r1``."""
    values = (n0, n0, r0, return_value(r0, n0), n1, n1, r1, return_value(r1, n1))
    return SystemExecution(order, values, bound)


def read_choices(order: Precedence, n0: int, n1: int, sem, bound: int) -> tuple[frozenset[int], frozenset[int]]:
    """Allowed values of ``a_3`` (reads R_1, written by b_2) and ``b_3`` (reads R_0, written by a_2)."""
    a3 = allowed_read_values(A3, order, [(B2, n1)], 0, sem, bound)
    b3 = allowed_read_values(B3, order, [(A2, n0)], 0, sem, bound)
    return a3, b3


def is_serializable(order: Precedence) -> bool:
    """Each read comparable with the write on its register."""
    return not order.concurrent(A3, B2) and not order.concurrent(B3, A2)


def enumerate_restricted_executions(bound: int, sem: RegisterSemantics | str,
                                    orders: Iterable[Precedence] | None = None) -> Iterator[SystemExecution]:
    """orders x picks in 1..bound x allowed read values; orders on which a serial
    register is impossible are skipped under serial semantics."""
    sem = RegisterSemantics(sem)
    orders = enumerate_two_chain_orders(4) if orders is None else orders
    for order in orders:
        if sem is RegisterSemantics.SERIAL and not is_serializable(order):
            continue
        for n0, n1 in itertools.product(range(1, bound + 1), repeat=2):
            a3, b3 = read_choices(order, n0, n1, sem, bound)
            for r0 in sorted(a3):
                for r1 in sorted(b3):
                    yield build_execution(order, n0, n1, r0, r1, bound)


# --------------------------------------------------------------------------
# Restricted-execution conditions
# --------------------------------------------------------------------------


def partition_sentence() -> folk.FOFormula:
    return And((
        Forall("e", Or((Pred("p_0", "e"), Pred("p_1", "e")))),
        Not(Exists("e", And((Pred("p_0", "e"), Pred("p_1", "e"))))),
    ))


def register_sentence(i: int) -> folk.FOFormula:
    """Regularity of register ``R_i``, owned by process ``i``."""
    return folk.regularity_sentence(f"Read_R_{i}", f"Write_R_{i}", f"p_{i}", f"d_R_{i}")


def restricted_violations(e: SystemExecution, sem: RegisterSemantics | str = RegisterSemantics.REGULAR) -> list[str]:
    """Conditions of a restricted execution that ``e`` fails; empty means it is one.

    The register condition is checked natively for ``sem``; for regular
    semantics the first-order regularity sentences are checked as well.
    """
    sem = RegisterSemantics(sem)
    s = e.structure
    problems = []
    if not folk.is_system_execution(s):
        problems.append("precedence is not a Russell-Wiener strict partial order")
    if not folk.evaluate(s, partition_sentence()):
        problems.append("events are not partitioned between p_0 and p_1")
    for i in (0, 1):
        reduct = s.reduct(s.predicates[f"p_{i}"], predicates=process_predicates(i).values(), constants=())
        if not satisfies_run_properties(reduct, i, e.bound):
            problems.append(f"reduct to p_{i} violates the non-restricted properties")
    if not register_values_ok(e, sem):
        problems.append(f"read values not allowed by {sem.value} registers")
    if sem is RegisterSemantics.REGULAR:
        for i in (0, 1):
            if not folk.evaluate(s, register_sentence(i)):
                problems.append(f"R_{i} regularity sentence fails")
    return problems


def register_values_ok(e: SystemExecution, sem: RegisterSemantics | str) -> bool:
    n0, n1 = e.picks
    try:
        a3, b3 = read_choices(e.order, n0, n1, sem, e.bound)
    except SerialityViolation:
        return False
    return e.values[A3] in a3 and e.values[B3] in b3


# --------------------------------------------------------------------------
# Theorem and lemmas
# --------------------------------------------------------------------------


def trichotomy_violation(e: SystemExecution) -> str | None:
    (x, y), (u, w) = e.picks, e.returns
    if x < y and not u < w:
        return "item 1: Val(a_1)<Val(b_1) but not Val(a_4)<Val(b_4)"
    if x > y and not u > w:
        return "item 2: Val(a_1)>Val(b_1) but not Val(a_4)>Val(b_4)"
    if x == y and not u == w == 0:
        return "item 3: Val(a_1)=Val(b_1) but not Val(a_4)=Val(b_4)=0"
    return None


def check_lemma_ml(e: SystemExecution) -> bool:
    """The two reads do not both return 0."""
    return not (e.values[A3] == 0 and e.values[B3] == 0)


def check_lemma_lm1(e: SystemExecution) -> bool:
    """With Val(a_1)<Val(b_1): a non-zero b_3 forces b_4=1 and a non-zero a_3 forces a_4=-1."""
    if not e.values[A1] < e.values[B1]:
        return True
    if e.values[B3] != 0 and e.values[B4] != 1:
        return False
    if e.values[A3] != 0 and e.values[A4] != -1:
        return False
    return True


def check_concurrency_lemma(order: Precedence) -> bool:
    """b_2 precedes a_3 or a_2 precedes b_3."""
    return order.precedes(B2, A3) or order.precedes(A2, B3)


def _ms(t0):
    return round((time.perf_counter() - t0) * 1000, 3)


def check_theorem33(bound: int = 3, sem: RegisterSemantics | str = RegisterSemantics.REGULAR) -> Verdict:
    sem = RegisterSemantics(sem)
    t0 = time.perf_counter()
    v = Verdict("theorem33", {"bound": bound, "registers": sem.value})
    orders = enumerate_two_chain_orders(4)
    count = 0
    for e in enumerate_restricted_executions(bound, sem, orders):
        count += 1
        why = trichotomy_violation(e)
        if why and v.passed:
            v.fail({"violation": why, "picks": list(e.picks), "reads": list(e.reads),
                    "returns": list(e.returns), "execution": e.to_json()})
    v.stats = {"orders": len(orders), "executions": count, "elapsed_ms": _ms(t0)}
    return v


def check_lemmas(bound: int = 3, sem: RegisterSemantics | str = RegisterSemantics.REGULAR) -> Verdict:
    sem = RegisterSemantics(sem)
    t0 = time.perf_counter()
    v = Verdict("lemmas", {"bound": bound, "registers": sem.value})
    orders = enumerate_two_chain_orders(4)
    for order in orders:
        if not is_russell_wiener(order):
            v.fail({"lemma": "interval order", "order": order.to_json(EVENTS)})
        if not check_concurrency_lemma(order):
            v.fail({"lemma": "concurrency", "order": order.to_json(EVENTS)})
    count = 0
    for e in enumerate_restricted_executions(bound, sem, orders):
        count += 1
        if not check_lemma_ml(e):
            v.fail({"lemma": "ML", "execution": e.to_json()})
        if not check_lemma_lm1(e):
            v.fail({"lemma": "LM1", "execution": e.to_json()})
    v.stats = {"orders": len(orders), "executions": count, "elapsed_ms": _ms(t0)}
    return v
