"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed
in the pytest terminal summary."""

import itertools
import json
import time
from contextlib import redirect_stdout
from io import StringIO

from kishon import folk
from kishon.bridge import check_seriality_theorem
from kishon.cli import main
from kishon.executions import (
    RegisterSemantics,
    build_execution,
    check_lemmas,
    check_theorem33,
    read_choices,
    register_sentence,
)
from kishon.global_sem import check_theorem1, check_theorem2
from kishon.nonrestricted import check_alpha_invariant
from kishon.orders import all_strict_partial_orders, enumerate_two_chain_orders, is_russell_wiener, realize_intervals
from kishon.verdict import Verdict


def cli(*argv):
    buf = StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, Verdict.from_json(buf.getvalue())


def finish(report, name, ok, elapsed, limit, detail=""):
    ok_time = elapsed <= limit
    report(name, ok and ok_time, f"{elapsed:.1f}s of {limit}s" + (f"; {detail}" if detail else ""))
    assert ok, detail
    assert ok_time, f"took {elapsed:.1f}s, limit {limit}s"


def test_1_invariant(report):
    t0 = time.perf_counter()
    code, v = cli("check-invariant", "--bound", "3")
    ok = code == 0 and v.passed and v.stats["states_scanned"] == 921600
    finish(report, "1 inductive invariant at N=3", ok, time.perf_counter() - t0, 60,
           f"{v.stats['states_scanned']} states, {v.stats['steps_checked']} steps")


def test_2_theorem1(report):
    t0 = time.perf_counter()
    v = check_theorem1(5)
    ok = v.passed and v.stats["histories"] == 70 * 25 and v.stats["histories_per_pick_pair"] == [70]
    finish(report, "2 interleaved trichotomy, picks 1..5", ok, time.perf_counter() - t0, 5,
           f"{v.stats['histories']} histories")


def test_3_theorem2(report):
    t0 = time.perf_counter()
    v = check_theorem2(3)
    ok = v.passed and v.stats["histories"] == 630 and v.stats["qualifying_states"] > 0
    finish(report, "3 final-state claims and lemma at N=3", ok, time.perf_counter() - t0, 60,
           f"{v.stats['qualifying_states']} lemma states")


def test_4_theorem33_regular(report):
    t0 = time.perf_counter()
    th = check_theorem33(3, RegisterSemantics.REGULAR)
    lem = check_lemmas(3, RegisterSemantics.REGULAR)
    ok = th.passed and lem.passed and th.stats["orders"] == 1107
    finish(report, "4 execution trichotomy with regular registers, N=3", ok, time.perf_counter() - t0, 120,
           f"{th.stats['orders']} orders, {th.stats['executions']} executions")


def test_5_safe_counterexample(report):
    t0 = time.perf_counter()
    code, v = cli("check-theorem33", "--registers", "safe", "--bound", "2")
    cex = v.counterexample or {}
    witness = folk.FiniteStructure.from_json(cex["execution"]) if "execution" in cex else None
    ok = code == 1 and not v.passed and witness is not None and folk.is_system_execution(witness)
    finish(report, "5 safe registers break the trichotomy at N=2", ok, time.perf_counter() - t0, 120,
           f"picks {cex.get('picks')}, returns {cex.get('returns')}")


def test_6_seriality(report):
    t0 = time.perf_counter()
    v = check_seriality_theorem(3)
    ok = v.passed and v.stats["histories"] == 630
    finish(report, "6 bridged histories satisfy serial and regular specs, N=3", ok,
           time.perf_counter() - t0, 30, f"{v.stats['histories']} histories")


def test_7_nonrestricted(report):
    t0 = time.perf_counter()
    subs = [check_alpha_invariant(3, i) for i in (0, 1)]
    ok = all(s.passed and s.stats["executions"] == 12 for s in subs)
    finish(report, "7 local invariant and per-process properties, N=3", ok, time.perf_counter() - t0, 5,
           f"{[s.stats['executions'] for s in subs]} executions")


def test_8_oracle_equivalences(report):
    t0 = time.perf_counter()
    rw = folk.russell_wiener_sentence()
    checked_a = 0
    ok_a = True
    for n in range(0, 7):
        for p in all_strict_partial_orders(n):
            names = tuple(f"e{k}" for k in range(n))
            s = folk.FiniteStructure(events=names, val={e: 0 for e in names},
                                     precedence=frozenset((names[i], names[j]) for i, j in p.pairs))
            ok_a &= folk.evaluate(s, rw) == is_russell_wiener(p)
            checked_a += 1

    orders = enumerate_two_chain_orders(4)
    checked_b = 0
    ok_b = True
    for o in orders:
        for n0, n1 in itertools.product((1, 2), repeat=2):
            a3, b3 = read_choices(o, n0, n1, RegisterSemantics.REGULAR, 2)
            for r0, r1 in itertools.product(range(3), repeat=2):
                s = build_execution(o, n0, n1, r0, r1, 2).structure
                ok_b &= folk.evaluate(s, register_sentence(0)) == (r1 in b3)
                ok_b &= folk.evaluate(s, register_sentence(1)) == (r0 in a3)
                checked_b += 1

    ok_c = all(realize_intervals(o).precedence() == o for o in orders)
    finish(report, "8 oracle equivalences", ok_a and ok_b and ok_c, time.perf_counter() - t0, 60,
           f"{checked_a} orders, {checked_b} read assignments, {len(orders)} realizations")
