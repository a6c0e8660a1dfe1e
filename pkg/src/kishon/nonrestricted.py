"""Per-process semantics with no assumption on the registers.

An extended state of process ``i`` is a finite structure holding every event
the process has performed so far, linearly ordered, together with the local
constants ``n_i, v_i, val_i, PC_i``. Registers occur only in predicate names
(``Write_R_i``, ``Read_R_j``); they carry no value here. A read step may
return any value of the type ``{0..N}``.

Two property sets are checked over these structures: the five-item property
list a finished run must satisfy (the run properties) and the PC-indexed inductive
conjunction used to prove it (``alpha``). Both have a native implementation
and a first-order rendering evaluated through :mod:`kishon.folk`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import folk
from .folk import (
    And,
    Const,
    DataCmp,
    Eq,
    FiniteStructure,
    Forall,
    Implies,
    Lit,
    Not,
    Or,
    Pred,
    Prec,
    ValOf,
    conj,
    data_universe,
    disj,
    exists,
    val_cmp,
)
from .protocol import decision, eval_expression
from .verdict import Verdict

EVENT_PREFIX = ("a", "b")


def event_label(process: int, index: int) -> str:
    """Opaque label of the ``index``-th event (1-based) of ``process``: a_1.., b_1.."""
    return f"{EVENT_PREFIX[process]}_{index}"


def process_predicates(i: int) -> dict[str, str]:
    """Predicate names of process ``i``'s language keyed by role."""
    return {
        "process": f"p_{i}",
        "assign": f"Assignment_n_{i}",
        "write": f"Write_R_{i}",
        "read": f"Read_R_{1 - i}",
        "return": f"Return_{i}",
    }


LINE_ROLE = {1: "assign", 2: "write", 3: "read", 4: "return"}


def constant_names(i: int) -> dict[str, str]:
    return {"n": f"n_{i}", "v": f"v_{i}", "val": f"val_{i}", "pc": f"PC_{i}"}


@dataclass(frozen=True)
class ExtendedState:
    process: int
    structure: FiniteStructure

    def const(self, key: str) -> int:
        return self.structure.constants[constant_names(self.process)[key]]

    @property
    def pc(self) -> int:
        return self.const("pc")

    @property
    def n(self) -> int:
        return self.const("n")

    @property
    def v(self) -> int:
        return self.const("v")

    @property
    def val(self) -> int:
        return self.const("val")

    @property
    def events(self) -> tuple[str, ...]:
        return self.structure.events

    def functional_state(self) -> dict[str, int]:
        """The plain local state ``x -> x^M`` projected from the structure."""
        return {key: self.const(key) for key in ("n", "v", "val", "pc")}

    def to_json(self) -> dict:
        return {"process": self.process, "structure": self.structure.to_json()}


@dataclass(frozen=True)
class LocalStep:
    pre: ExtendedState
    post: ExtendedState
    line: int

    @property
    def label(self) -> str:
        i = self.pre.process
        return f"({self.line}_{i},{self.line + 1}_{i})"


def initial_extended_state(i: int, bound: int = 3) -> ExtendedState:
    if i not in (0, 1):
        raise ValueError("process must be 0 or 1")
    names = constant_names(i)
    return ExtendedState(
        i,
        FiniteStructure(
            events=(),
            data_universe=data_universe(bound),
            predicates={p: frozenset() for p in process_predicates(i).values()},
            precedence=frozenset(),
            val={},
            constants={names["n"]: 0, names["v"]: 0, names["val"]: 0, names["pc"]: 1},
        ),
    )


def _extend(s: ExtendedState, value: int, changes: dict[str, int]) -> ExtendedState:
    i, m = s.process, s.structure
    line = s.pc
    e = event_label(i, len(m.events) + 1)
    roles = process_predicates(i)
    preds = dict(m.predicates)
    for role in ("process", LINE_ROLE[line]):
        preds[roles[role]] = preds[roles[role]] | {e}
    consts = dict(m.constants)
    names = constant_names(i)
    for key, x in changes.items():
        consts[names[key]] = x
    consts[names["pc"]] = line + 1
    return ExtendedState(
        i,
        FiniteStructure(
            events=m.events + (e,),
            data_universe=m.data_universe,
            predicates=preds,
            precedence=m.precedence | {(x, e) for x in m.events},
            val={**m.val, e: value},
            constants=consts,
        ),
    )


def local_successors(s: ExtendedState, bound: int) -> list[LocalStep]:
    line = s.pc
    if line >= 5:
        return []
    if line == 1:
        posts = [_extend(s, x, {"n": x}) for x in range(1, bound + 1)]
    elif line == 2:
        posts = [_extend(s, s.n, {})]
    elif line == 3:
        posts = [_extend(s, x, {"v": x}) for x in range(0, bound + 1)]
    else:
        r = int(eval_expression(decision("v", "n"), {"v": s.v, "n": s.n}))
        posts = [_extend(s, r, {"val": r})]
    return [LocalStep(s, t, line) for t in posts]


def is_end_extension(m: ExtendedState, n: ExtendedState) -> bool:
    """``m``'s events form an initial segment of ``n`` and ``n`` restricted to them is ``m``."""
    if m.process != n.process:
        return False
    old = set(m.events)
    if not old <= set(n.events):
        return False
    later = [y for y in n.events if y not in old]
    if not all(n.structure.precedes(x, y) for x in old for y in later):
        return False
    restricted = n.structure.reduct(old, constants=())
    return restricted == m.structure.reduct(old, constants=())


def enumerate_nonrestricted_executions(i: int, bound: int) -> list[ExtendedState]:
    """Final states (PC=5) of all maximal local histories of process ``i``."""
    frontier = [initial_extended_state(i, bound)]
    finals = []
    while frontier:
        s = frontier.pop()
        steps = local_successors(s, bound)
        if not steps:
            finals.append(s)
        frontier.extend(st.post for st in reversed(steps))
    return finals


def reachable_local_steps(i: int, bound: int) -> list[LocalStep]:
    out = []
    frontier = [initial_extended_state(i, bound)]
    while frontier:
        s = frontier.pop()
        for st in local_successors(s, bound):
            out.append(st)
            frontier.append(st.post)
    return out


# --------------------------------------------------------------------------
# Native property checks
# --------------------------------------------------------------------------


def _linear_events(m: FiniteStructure) -> list[str] | None:
    """Events listed in precedence order if the order is a strict chain, else None."""
    ranked = sorted(m.events, key=lambda e: sum(1 for x in m.events if m.precedes(x, e)))
    for k, x in enumerate(ranked):
        for y in ranked[k + 1:]:
            if not m.precedes(x, y) or m.precedes(y, x):
                return None
        if m.precedes(x, x):
            return None
    return ranked


def _return_rule(a1: int, a3: int, a4: int) -> bool:
    if a3 == 0 or a3 == a1:
        return a4 == 0
    if 0 < a3 < a1:
        return a4 == 1
    return a4 == -1


def _as_structure(m) -> FiniteStructure:
    return m.structure if isinstance(m, ExtendedState) else m


def _prefix_ok(m: FiniteStructure, chain: list[str], i: int, bound: int) -> bool:
    """The first ``len(chain)`` events carry the roles and values of a run so far."""
    roles = process_predicates(i)
    role_names = [roles[LINE_ROLE[k]] for k in range(1, 5)]
    for k, e in enumerate(chain, start=1):
        held = {name for name in role_names if m.holds(name, e)}
        if held != {roles[LINE_ROLE[k]]}:
            return False
    vals = [m.val[e] for e in chain]
    if len(chain) >= 1 and not (1 <= vals[0] <= bound):
        return False
    if len(chain) >= 2 and vals[1] != vals[0]:
        return False
    if len(chain) >= 3 and not (0 <= vals[2] <= bound):
        return False
    if len(chain) >= 4 and not _return_rule(vals[0], vals[2], vals[3]):
        return False
    return True


def satisfies_run_properties(m, i: int, bound: int, method: str = "native") -> bool:
    """Four linearly ordered events of process ``i``: assignment (Val>0), the only
    write (same value), the only read (value in 0..N), a return obeying the
    three-case rule."""
    s = _as_structure(m)
    if method == "formula":
        return folk.evaluate(s, run_properties_sentence(i, bound))
    if method != "native":
        raise ValueError(f"unknown method {method!r}")
    roles = process_predicates(i)
    if len(s.events) != 4 or not all(s.holds(roles["process"], e) for e in s.events):
        return False
    chain = _linear_events(s)
    return chain is not None and _prefix_ok(s, chain, i, bound)


def alpha_holds(st: ExtendedState, bound: int, method: str = "native") -> bool:
    """The PC-indexed inductive properties of a partial run."""
    if method == "formula":
        return folk.evaluate(st.structure, alpha_sentence(st.process, bound))
    if method != "native":
        raise ValueError(f"unknown method {method!r}")
    s = st.structure
    roles = process_predicates(st.process)
    if not all(s.holds(roles["process"], e) for e in s.events):
        return False
    if not 1 <= st.pc <= 5 or len(s.events) != st.pc - 1:
        return False
    chain = _linear_events(s)
    return chain is not None and _prefix_ok(s, chain, st.process, bound)


# --------------------------------------------------------------------------
# First-order renderings
# --------------------------------------------------------------------------

_VARS = ("a1", "a2", "a3", "a4")


def _run_body(i: int, bound: int, k: int) -> folk.FOFormula:
    """Existential body: events a1..ak form the whole chain with their roles and values."""
    roles = process_predicates(i)
    vs = _VARS[:k]
    parts = [Prec(x, y) for x, y in zip(vs, vs[1:])]
    parts.append(Forall("e", disj(*(Eq("e", x) for x in vs))) if vs else Not(folk.Exists("e", folk.TRUE)))
    if k >= 1:
        parts += [Pred(roles["assign"], "a1"), val_cmp("a1", ">", 0), val_cmp("a1", "<=", bound)]
    if k >= 2:
        parts += [Pred(roles["write"], "a2"), val_cmp("a2", "=", "a1")]
    if k >= 3:
        parts += [Pred(roles["read"], "a3"), val_cmp("a3", ">=", 0), val_cmp("a3", "<=", bound)]
    if k >= 4:
        parts += [
            Pred(roles["return"], "a4"),
            Implies(Or((val_cmp("a3", "=", 0), val_cmp("a3", "=", "a1"))), val_cmp("a4", "=", 0)),
            Implies(And((val_cmp("a3", ">", 0), val_cmp("a3", "<", "a1"))), val_cmp("a4", "=", 1)),
            Implies(val_cmp("a3", ">", "a1"), val_cmp("a4", "=", -1)),
        ]
    # each event carries exactly its own role predicate
    role_list = [roles[LINE_ROLE[j]] for j in range(1, 5)]
    for j, x in enumerate(vs, start=1):
        parts += [Not(Pred(r, x)) for r in role_list if r != roles[LINE_ROLE[j]]]
    return exists(vs, conj(*parts)) if vs else conj(*parts)


def run_properties_sentence(i: int, bound: int) -> folk.FOFormula:
    roles = process_predicates(i)
    everyone = Forall("e", Pred(roles["process"], "e"))
    return conj(everyone, _run_body(i, bound, 4))


def alpha_sentence(i: int, bound: int) -> folk.FOFormula:
    roles = process_predicates(i)
    pc = Const(constant_names(i)["pc"])
    items = [Forall("e", Pred(roles["process"], "e"))]
    for k in range(1, 6):
        items.append(Implies(DataCmp("=", pc, Lit(k)), _run_body(i, bound, k - 1)))
    items.append(And((DataCmp(">=", pc, Lit(1)), DataCmp("<=", pc, Lit(5)))))
    return conj(*items)


# --------------------------------------------------------------------------
# Checks
# --------------------------------------------------------------------------


def check_alpha_invariant(bound: int = 3, i: int = 0) -> Verdict:
    """alpha holds initially and is preserved along every local step reachable
    within the bound; every step end-extends by one new maximal event; the
    finished runs satisfy the run properties."""
    t0 = time.perf_counter()
    v = Verdict("nonrestricted", {"bound": bound, "process": i})
    init = initial_extended_state(i, bound)
    for method in ("native", "formula"):
        if not alpha_holds(init, bound, method):
            v.fail({"reason": f"alpha fails initially ({method})", "state": init.to_json()})
    steps = reachable_local_steps(i, bound)
    for st in steps:
        pre_ok = alpha_holds(st.pre, bound)
        post_ok = alpha_holds(st.post, bound)
        if post_ok != alpha_holds(st.post, bound, "formula"):
            v.fail({"reason": "native and first-order alpha disagree", "state": st.post.to_json()})
        if pre_ok and not post_ok:
            v.fail({"reason": "alpha not preserved", "step": st.label, "post": st.post.to_json()})
        new = [e for e in st.post.events if e not in st.pre.events]
        if not is_end_extension(st.pre, st.post) or len(new) != 1:
            v.fail({"reason": "step is not a one-event end-extension", "step": st.label,
                    "post": st.post.to_json()})
    finals = enumerate_nonrestricted_executions(i, bound)
    for m in finals:
        native = satisfies_run_properties(m, i, bound)
        formula = satisfies_run_properties(m, i, bound, "formula")
        if native != formula:
            v.fail({"reason": "native and first-order run properties disagree", "execution": m.to_json()})
        if not (native and m.pc == 5):
            v.fail({"reason": "execution violates the run properties", "execution": m.to_json()})
    if len(finals) != bound * (bound + 1):
        v.fail({"reason": "unexpected execution count", "count": len(finals)})
    v.stats = {"steps_checked": len(steps), "executions": len(finals), "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3)}
    return v
