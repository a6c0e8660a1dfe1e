"""Interleaving semantics: global states, steps, histories and invariants.

A global state assigns a value to every program variable of both processes,
to both registers and to both program counters. A step executes the current
instruction of one process. Registers behave serially by construction: a read
step copies whatever the register holds in the pre-state.

Inductive-invariant checks sweep *every* well-typed state at bound ``N`` (not
only reachable ones). The sweep is vectorized: the state space is laid out as
one numpy column per variable and sentential formulas evaluate column-wise.
"""

from __future__ import annotations

import operator
import time
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

import numpy as np

from .protocol import (
    NAT,
    ComputeReturn,
    PickNonZero,
    Protocol,
    ReadReg,
    WriteReg,
    eval_expression,
    kishon_protocol,
)
from .verdict import Verdict

# --------------------------------------------------------------------------
# State variables and types
# --------------------------------------------------------------------------


def pc_name(i: int) -> str:
    return f"PC_{i}"


def state_variables(p: Protocol) -> tuple[str, ...]:
    names = [d.name for proc in p.processes for d in proc.locals]
    names += list(p.registers)
    names += [pc_name(i) for i in range(len(p.processes))]
    return tuple(names)


def variable_types(p: Protocol, bound: int) -> dict[str, tuple[int, int]]:
    """Inclusive ``(lo, hi)`` range of each state variable; ``bound`` stands for N."""
    out = {}
    for proc in p.processes:
        for d in proc.locals:
            out[d.name] = (0, bound) if d.type == NAT else (-1, 1)
    for r in p.registers:
        out[r] = (0, bound)
    for i, proc in enumerate(p.processes):
        out[pc_name(i)] = (1, proc.final_pc)
    return out


@dataclass(frozen=True)
class GlobalState:
    names: tuple[str, ...]
    values: tuple[int, ...]

    def __getitem__(self, name: str) -> int:
        try:
            return self.values[self.names.index(name)]
        except ValueError:
            raise KeyError(name) from None

    def get(self, name, default=None):
        return self[name] if name in self.names else default

    def __contains__(self, name) -> bool:
        return name in self.names

    def keys(self):
        return self.names

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.names, self.values))

    def replace(self, changes: Mapping[str, int]) -> "GlobalState":
        return GlobalState(self.names, tuple(int(changes.get(n, v)) for n, v in zip(self.names, self.values)))

    @classmethod
    def of(cls, p: Protocol, **values: int) -> "GlobalState":
        names = state_variables(p)
        missing = set(names) - set(values)
        if missing:
            raise ValueError(f"missing values for {sorted(missing)}")
        return cls(names, tuple(int(values[n]) for n in names))


def initial_state(p: Protocol) -> GlobalState:
    values = {}
    for proc in p.processes:
        for d in proc.locals:
            values[d.name] = d.initial
    for proc in p.processes:
        values[proc.register] = proc.register_initial
    for i in range(len(p.processes)):
        values[pc_name(i)] = 1
    return GlobalState.of(p, **values)


def is_final(s: GlobalState, p: Protocol) -> bool:
    return all(s[pc_name(i)] == proc.final_pc for i, proc in enumerate(p.processes))


def is_well_typed(s: GlobalState, p: Protocol, bound: int) -> bool:
    types = variable_types(p, bound)
    return all(types[n][0] <= v <= types[n][1] for n, v in zip(s.names, s.values))


# --------------------------------------------------------------------------
# Steps
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GlobalStep:
    pre: GlobalState
    post: GlobalState
    process: int
    line: int
    value: int

    @property
    def label(self) -> str:
        i, k = self.process, self.line
        return f"({k}_{i},{k + 1}_{i})"

    def to_json(self) -> dict:
        return {"label": self.label, "value": self.value, "pre": self.pre.as_dict(), "post": self.post.as_dict()}


def _updates(p: Protocol, i: int, line: int, env: Mapping, bound: int) -> list[tuple[dict, object]]:
    """Branches of process ``i`` executing ``line`` from ``env``: (changes, step value)."""
    ins = p.processes[i].instructions[line - 1]
    pc = {pc_name(i): line + 1}
    if isinstance(ins, PickNonZero):
        return [({ins.target: x, **pc}, x) for x in range(1, bound + 1)]
    if isinstance(ins, WriteReg):
        x = env[ins.source]
        return [({ins.register: x, **pc}, x)]
    if isinstance(ins, ReadReg):
        x = env[ins.register]
        return [({ins.target: x, **pc}, x)]
    if isinstance(ins, ComputeReturn):
        x = eval_expression(ins.expr, env)
        return [({ins.target: x, **pc}, x)]
    raise TypeError(f"unsupported instruction {ins!r}")


def successors(s: GlobalState, p: Protocol, bound: int) -> list[GlobalStep]:
    out = []
    for i, proc in enumerate(p.processes):
        line = s[pc_name(i)]
        if line >= proc.final_pc:
            continue
        for changes, value in _updates(p, i, line, s, bound):
            out.append(GlobalStep(s, s.replace(changes), i, line, int(value)))
    return out


def is_step(pre: GlobalState, post: GlobalState, p: Protocol, bound: int) -> bool:
    return any(st.post == post for st in successors(pre, p, bound))


# --------------------------------------------------------------------------
# Histories
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class History:
    steps: tuple[GlobalStep, ...]

    def __post_init__(self):
        for a, b in zip(self.steps, self.steps[1:]):
            if a.post != b.pre:
                raise ValueError("steps do not chain: post-state differs from next pre-state")

    @property
    def states(self) -> tuple[GlobalState, ...]:
        if not self.steps:
            return ()
        return (self.steps[0].pre,) + tuple(st.post for st in self.steps)

    @property
    def final(self) -> GlobalState:
        return self.steps[-1].post

    def schedule(self) -> tuple[tuple[int, int], ...]:
        return tuple((st.process, st.line) for st in self.steps)

    def to_json(self) -> dict:
        return {"steps": [st.to_json() for st in self.steps]}


def validate_history(h: History, p: Protocol, bound: int) -> list[str]:
    problems = []
    if h.steps and h.steps[0].pre != initial_state(p):
        problems.append("does not start at the initial state")
    for k, st in enumerate(h.steps):
        if st not in successors(st.pre, p, bound):
            problems.append(f"step {k} {st.label} is not a step of the protocol")
    return problems


def enumerate_histories(p: Protocol, bound: int) -> Iterator[History]:
    """Every terminating history, depth first; pick values range over 1..bound."""

    def go(s: GlobalState, acc: list[GlobalStep]):
        if is_final(s, p):
            yield History(tuple(acc))
            return
        for st in successors(s, p, bound):
            acc.append(st)
            yield from go(st.post, acc)
            acc.pop()

    yield from go(initial_state(p), [])


def read_seriality_violations(h: History, p: Protocol) -> list[dict]:
    """Read steps whose value is not the last preceding write's (or the initial value)."""
    current = {r: p.register_initial(r) for r in p.registers}
    bad = []
    for k, st in enumerate(h.steps):
        ins = p.processes[st.process].instructions[st.line - 1]
        if isinstance(ins, WriteReg):
            current[ins.register] = st.value
        elif isinstance(ins, ReadReg) and st.value != current[ins.register]:
            bad.append({"step": k, "label": st.label, "register": ins.register,
                        "read": st.value, "expected": current[ins.register]})
    return bad


# --------------------------------------------------------------------------
# Sentential formulas
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Compare:
    op: str
    lhs: Union[Var, Num]
    rhs: Union[Var, Num]


@dataclass(frozen=True)
class AllOf:
    args: tuple["Sentential", ...]


@dataclass(frozen=True)
class SomeOf:
    args: tuple["Sentential", ...]


@dataclass(frozen=True)
class Neg:
    arg: "Sentential"


@dataclass(frozen=True)
class Imp:
    hyp: "Sentential"
    concl: "Sentential"


Sentential = Union[Compare, AllOf, SomeOf, Neg, Imp]

_OPS = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


def _term(x):
    return Var(x) if isinstance(x, str) else Num(x)


def cmp(lhs: Union[str, int], op: str, rhs: Union[str, int]) -> Compare:
    if op not in _OPS:
        raise ValueError(f"unknown comparison {op!r}")
    return Compare(op, _term(lhs), _term(rhs))


def conj(*fs: Sentential) -> Sentential:
    return fs[0] if len(fs) == 1 else AllOf(tuple(fs))


def disj(*fs: Sentential) -> Sentential:
    return fs[0] if len(fs) == 1 else SomeOf(tuple(fs))


def variables_of(f: Sentential) -> set[str]:
    if isinstance(f, Compare):
        return {t.name for t in (f.lhs, f.rhs) if isinstance(t, Var)}
    if isinstance(f, (AllOf, SomeOf)):
        return set().union(*(variables_of(a) for a in f.args))
    if isinstance(f, Neg):
        return variables_of(f.arg)
    if isinstance(f, Imp):
        return variables_of(f.hyp) | variables_of(f.concl)
    raise TypeError(f"not a sentential formula: {f!r}")


def eval_sentential(f: Sentential, s: Mapping):
    """``s |= f``. ``s`` is a :class:`GlobalState` (returns bool) or a mapping of
    equal-length numpy columns (returns a boolean array)."""
    out = _eval(f, s)
    return bool(out) if np.ndim(out) == 0 else out


def _eval(f, s):
    if isinstance(f, Compare):
        return _OPS[f.op](_value(f.lhs, s), _value(f.rhs, s))
    if isinstance(f, AllOf):
        acc = True
        for a in f.args:
            acc = np.logical_and(acc, _eval(a, s))
        return acc
    if isinstance(f, SomeOf):
        acc = False
        for a in f.args:
            acc = np.logical_or(acc, _eval(a, s))
        return acc
    if isinstance(f, Neg):
        return np.logical_not(_eval(f.arg, s))
    if isinstance(f, Imp):
        return np.logical_or(np.logical_not(_eval(f.hyp, s)), _eval(f.concl, s))
    raise TypeError(f"not a sentential formula: {f!r}")


def _value(t, s):
    if isinstance(t, Num):
        return t.value
    try:
        return s[t.name]
    except KeyError:
        raise KeyError(f"undeclared state variable {t.name}") from None


# --------------------------------------------------------------------------
# The invariant for Kishon's Poker
# --------------------------------------------------------------------------


def _process_conjuncts(i: int) -> dict[str, Sentential]:
    j = 1 - i
    pc, n, v, val = f"PC_{i}", f"n_{i}", f"v_{i}", f"val_{i}"
    own, other = f"R_{i}", f"R_{j}"
    name = "alpha" if i == 0 else "beta"
    return {
        f"{name}1": Imp(cmp(pc, ">=", 2), cmp(n, ">", 0)),
        f"{name}2": Imp(cmp(pc, "<=", 2), cmp(own, "=", 0)),
        f"{name}3": Imp(cmp(pc, ">=", 3), cmp(own, "=", n)),
        f"{name}4": Imp(cmp(v, "!=", 0), cmp(v, "=", other)),
        f"{name}5": Imp(
            cmp(pc, "=", 5),
            conj(
                Imp(cmp(v, "=", 0), cmp(val, "=", 0)),
                Imp(cmp(v, "=", n), cmp(val, "=", 0)),
                Imp(conj(cmp(v, ">", 0), cmp(v, "<", n)), cmp(val, "=", 1)),
                Imp(cmp(v, ">", n), cmp(val, "=", -1)),
            ),
        ),
    }


def type_formula(p: Protocol, bound: int) -> Sentential:
    """Every state variable lies in its type, with ``bound`` standing for N."""
    return conj(*(conj(cmp(x, ">=", lo), cmp(x, "<=", hi)) for x, (lo, hi) in variable_types(p, bound).items()))


def phi_components(bound: int, p: Protocol | None = None) -> dict[str, Sentential]:
    p = p or kishon_protocol()
    out = {}
    out.update(_process_conjuncts(0))
    out.update(_process_conjuncts(1))
    out["gamma"] = Imp(
        conj(cmp("PC_0", ">=", 4), cmp("PC_1", ">=", 4)),
        disj(cmp("v_0", "=", "R_1"), cmp("v_1", "=", "R_0")),
    )
    out["tau"] = type_formula(p, bound)
    return out


def phi_invariant(bound: int, p: Protocol | None = None) -> Sentential:
    return AllOf(tuple(phi_components(bound, p).values()))


def final_state_claims() -> dict[str, Sentential]:
    """Equal picks give val 0 on both sides; the smaller pick gets the smaller val."""
    return {
        "equal": Imp(cmp("n_0", "=", "n_1"), conj(cmp("val_0", "=", 0), cmp("val_1", "=", 0))),
        "less_0": Imp(cmp("n_0", "<", "n_1"), cmp("val_0", "<", "val_1")),
        "less_1": Imp(cmp("n_1", "<", "n_0"), cmp("val_1", "<", "val_0")),
    }


# --------------------------------------------------------------------------
# Vectorized state space
# --------------------------------------------------------------------------


def well_typed_columns(p: Protocol, bound: int) -> dict[str, np.ndarray]:
    """All well-typed states, one int16 column per variable (row = state)."""
    types = variable_types(p, bound)
    names = state_variables(p)
    axes = [np.arange(types[n][0], types[n][1] + 1, dtype=np.int16) for n in names]
    grids = np.meshgrid(*axes, indexing="ij")
    return {n: g.ravel() for n, g in zip(names, grids)}


def _state_at(cols: Mapping[str, np.ndarray], k: int, names) -> GlobalState:
    return GlobalState(tuple(names), tuple(int(cols[n][k]) for n in names))


def _vector_steps(cols, p: Protocol, bound: int):
    """Yield ``(process, line, pre_rows, post_columns, values)`` for every step class."""
    for i, proc in enumerate(p.processes):
        pc = cols[pc_name(i)]
        for line in range(1, proc.final_pc):
            rows = np.nonzero(pc == line)[0]
            if rows.size == 0:
                continue
            sub = {n: c[rows] for n, c in cols.items()}
            for changes, value in _updates(p, i, line, sub, bound):
                post = dict(sub)
                for n, x in changes.items():
                    post[n] = np.broadcast_to(np.asarray(x, dtype=np.int16), rows.shape)
                yield i, line, rows, post, np.broadcast_to(np.asarray(value), rows.shape)


def check_inductive_invariant(f: Sentential, p: Protocol | None = None, bound: int = 3,
                              mode: str = "all") -> Verdict:
    """Check ``f`` holds initially and is preserved by every step from every state satisfying it.

    ``mode="all"`` sweeps every well-typed state (the definition of record);
    ``mode="reachable"`` only the states reachable from the initial state.
    """
    p = p or kishon_protocol()
    t0 = time.perf_counter()
    v = Verdict("invariant", {"bound": bound, "mode": mode, "tau_bound": bound})
    names = state_variables(p)
    init = initial_state(p)
    if not eval_sentential(f, init):
        v.fail({"initial_state": init.as_dict()})
        v.stats = {"states_scanned": 1, "steps_checked": 0, "elapsed_ms": _ms(t0)}
        return v
    if mode == "all":
        cols = well_typed_columns(p, bound)
    elif mode == "reachable":
        cols = _columns_of(reachable_states(p, bound), names)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    holds = eval_sentential(f, cols)
    holds = np.broadcast_to(holds, cols[names[0]].shape)
    steps = 0
    for i, line, rows, post, values in _vector_steps(cols, p, bound):
        after = np.broadcast_to(eval_sentential(f, post), rows.shape)
        steps += int(holds[rows].sum())
        bad = np.nonzero(holds[rows] & ~after)[0]
        if bad.size and v.passed:
            k = bad[0]
            step = GlobalStep(_state_at(cols, rows[k], names), _state_at(post, k, names), i, line, int(values[k]))
            v.fail({"step": step.to_json()})
    v.stats = {
        "states_scanned": int(cols[names[0]].size),
        "states_satisfying": int(holds.sum()),
        "steps_checked": steps,
        "elapsed_ms": _ms(t0),
    }
    return v


def reachable_states(p: Protocol, bound: int) -> list[GlobalState]:
    seen = {initial_state(p)}
    frontier = [initial_state(p)]
    while frontier:
        s = frontier.pop()
        for st in successors(s, p, bound):
            if st.post not in seen:
                seen.add(st.post)
                frontier.append(st.post)
    return sorted(seen, key=lambda s: s.values)


def _columns_of(states, names) -> dict[str, np.ndarray]:
    arr = np.array([s.values for s in states], dtype=np.int64).reshape(len(states), len(names))
    return {n: arr[:, k] for k, n in enumerate(names)}


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000, 3)


# --------------------------------------------------------------------------
# Theorems about Kishon's Poker
# --------------------------------------------------------------------------


def check_final_state_lemma(bound: int = 3, p: Protocol | None = None) -> Verdict:
    """Every well-typed state with phi and both PCs at 5 satisfies the final-state claims."""
    p = p or kishon_protocol()
    t0 = time.perf_counter()
    v = Verdict("final_state_lemma", {"bound": bound, "tau_bound": bound})
    names = state_variables(p)
    cols = well_typed_columns(p, bound)
    premise = np.logical_and.reduce([
        eval_sentential(phi_invariant(bound, p), cols),
        cols["PC_0"] == 5,
        cols["PC_1"] == 5,
    ])
    for claim_name, claim in final_state_claims().items():
        bad = np.nonzero(premise & ~eval_sentential(claim, cols))[0]
        if bad.size:
            v.fail({"claim": claim_name, "state": _state_at(cols, bad[0], names).as_dict()})
    v.stats = {
        "states_scanned": int(cols[names[0]].size),
        "qualifying_states": int(premise.sum()),
        "elapsed_ms": _ms(t0),
    }
    return v


def trichotomy_holds(n0: int, n1: int, val0: int, val1: int) -> bool:
    if n0 < n1:
        return val0 < val1
    if n1 < n0:
        return val1 < val0
    return val0 == val1 == 0


def check_theorem1(bound: int = 5, p: Protocol | None = None) -> Verdict:
    """Scan every terminating history; the final state must satisfy the trichotomy."""
    p = p or kishon_protocol()
    t0 = time.perf_counter()
    v = Verdict("theorem1", {"bound": bound})
    per_pick: dict[tuple[int, int], int] = {}
    total = 0
    for h in enumerate_histories(p, bound):
        total += 1
        s = h.final
        key = (s["n_0"], s["n_1"])
        per_pick[key] = per_pick.get(key, 0) + 1
        if not trichotomy_holds(s["n_0"], s["n_1"], s["val_0"], s["val_1"]):
            v.fail({"history": h.to_json(), "final": s.as_dict()})
    expected = {(a, b) for a in range(1, bound + 1) for b in range(1, bound + 1)}
    counts = set(per_pick.values())
    if set(per_pick) != expected or counts != {70}:
        v.fail({"histories_per_pick_pair": {f"{a},{b}": c for (a, b), c in sorted(per_pick.items())}})
    v.stats = {
        "histories": total,
        "pick_pairs": len(per_pick),
        "histories_per_pick_pair": sorted(counts),
        "elapsed_ms": _ms(t0),
    }
    return v


def check_theorem2(bound: int = 3, p: Protocol | None = None) -> Verdict:
    """Final states of all histories satisfy the claims, and so does every
    well-typed state where phi holds with both processes finished."""
    p = p or kishon_protocol()
    t0 = time.perf_counter()
    v = Verdict("theorem2", {"bound": bound, "tau_bound": bound})
    claims = final_state_claims()
    histories = 0
    for h in enumerate_histories(p, bound):
        histories += 1
        for claim_name, claim in claims.items():
            if not eval_sentential(claim, h.final):
                v.fail({"claim": claim_name, "history": h.to_json()})
    lemma = check_final_state_lemma(bound, p)
    if not lemma.passed:
        v.fail(lemma.counterexample)
    v.stats = {
        "histories": histories,
        "states_scanned": lemma.stats["states_scanned"],
        "qualifying_states": lemma.stats["qualifying_states"],
        "elapsed_ms": _ms(t0),
    }
    return v

