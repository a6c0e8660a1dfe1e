"""Turn interleaved histories into system executions.

Each step of a terminating history becomes one event occupying a single
instant, so the precedence of the image is the total order of step positions.
Checking the register specifications on these images shows that seriality is
a consequence of the step relation, not an extra assumption.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import folk
from .executions import (
    EVENTS,
    RegisterSemantics,
    SystemExecution,
    register_sentence,
    register_values_ok,
)
from .global_sem import History, enumerate_histories, is_final
from .orders import Precedence
from .protocol import Protocol, kishon_protocol
from .verdict import Verdict


@dataclass(frozen=True)
class BridgedExecution:
    history: History
    execution: SystemExecution


def _index(process: int, line: int) -> int:
    return 4 * process + line - 1


def history_to_execution(h: History, bound: int, p: Protocol | None = None) -> BridgedExecution:
    p = p or kishon_protocol()
    if not h.steps or not is_final(h.final, p):
        raise ValueError("history is not terminating")
    positions = [_index(st.process, st.line) for st in h.steps]
    if sorted(positions) != list(range(len(EVENTS))):
        raise ValueError("history does not perform each line of each process exactly once")
    order = Precedence(
        len(EVENTS),
        frozenset((positions[x], positions[y]) for x in range(len(positions)) for y in range(x + 1, len(positions))),
    )
    values = [0] * len(EVENTS)
    for st, ix in zip(h.steps, positions):
        values[ix] = st.value
    return BridgedExecution(h, SystemExecution(order, tuple(values), bound))


def serial_violations(e: SystemExecution) -> list[dict]:
    """Reads that break the serial-register specification of their register.

    Serial: the read and the write on the register are comparable, and the read
    returns the last preceding write's value, or 0 when no write precedes it.
    """
    bad = []
    for read_proc in (0, 1):
        writer = 1 - read_proc
        r = 4 * read_proc + 2
        w = 4 * writer + 1
        o = e.order
        if o.concurrent(r, w):
            bad.append({"read": EVENTS[r], "register": f"R_{writer}", "reason": "read concurrent with write"})
            continue
        expected = e.values[w] if o.precedes(w, r) else 0
        if e.values[r] != expected:
            bad.append({"read": EVENTS[r], "register": f"R_{writer}", "reason": "stale value",
                        "read_value": e.values[r], "expected": expected})
    return bad


def check_seriality_theorem(bound: int = 3, p: Protocol | None = None) -> Verdict:
    """Every bridged history satisfies the serial and the regular register specifications."""
    p = p or kishon_protocol()
    t0 = time.perf_counter()
    v = Verdict("bridge", {"bound": bound})
    count = 0
    for h in enumerate_histories(p, bound):
        count += 1
        e = history_to_execution(h, bound, p).execution
        bad = serial_violations(e)
        if bad:
            v.fail({"violations": bad, "history": h.to_json()})
        if not register_values_ok(e, RegisterSemantics.SERIAL) or not register_values_ok(e, RegisterSemantics.REGULAR):
            v.fail({"reason": "read values outside the allowed set", "history": h.to_json()})
        if not folk.is_system_execution(e.structure):
            v.fail({"reason": "image is not a system execution", "history": h.to_json()})
        for i in (0, 1):
            if not folk.evaluate(e.structure, register_sentence(i)):
                v.fail({"reason": f"R_{i} regularity sentence fails", "history": h.to_json()})
    v.stats = {"histories": count, "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3)}
    return v

