"""Straight-line two-process protocol IR.

A protocol is two processes, each running a fixed list of instructions once,
top to bottom. Processes own exactly one register each and communicate only
through register writes and reads. The bundled instance is Kishon's Poker.

Expressions evaluate against plain ints or against numpy arrays of equal
shape, so the same program text drives both the scalar step relation and the
vectorized state-space sweeps in :mod:`kishon.global_sem`.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

# local-variable types; "nat" is bounded by N when enumerated, "ret" is {-1, 0, 1}
NAT = "nat"
RET = "ret"


# --------------------------------------------------------------------------
# Expressions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Local:
    name: str


@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class Cmp:
    op: str  # "=", "<", ">"
    lhs: "Expression"
    rhs: "Expression"


@dataclass(frozen=True)
class AnyOf:
    """Disjunction of boolean sub-expressions."""

    parts: tuple["Expression", ...]


@dataclass(frozen=True)
class IfThenElse:
    cond: "Expression"
    then: "Expression"
    orelse: "Expression"


Expression = Union[Local, Lit, Cmp, AnyOf, IfThenElse]

_CMP = {"=": operator.eq, "<": operator.lt, ">": operator.gt}


class UnboundLocal(KeyError):
    pass


def eval_expression(e: Expression, env: Mapping[str, object]):
    """Evaluate ``e`` against a total local assignment.

    Values in ``env`` may be ints or numpy arrays; the result has the same
    flavour. Integer results from scalar inputs are returned as ``int``.
    """
    out = _eval(e, env)
    if isinstance(out, np.ndarray) and out.ndim == 0:
        out = out.item()
    if isinstance(out, np.generic):
        out = out.item()
    return out


def _eval(e, env):
    if isinstance(e, Local):
        try:
            return env[e.name]
        except KeyError:
            raise UnboundLocal(e.name) from None
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Cmp):
        return _CMP[e.op](_eval(e.lhs, env), _eval(e.rhs, env))
    if isinstance(e, AnyOf):
        acc = False
        for part in e.parts:
            acc = np.logical_or(acc, _eval(part, env))
        return acc
    if isinstance(e, IfThenElse):
        return np.where(_eval(e.cond, env), _eval(e.then, env), _eval(e.orelse, env))
    raise TypeError(f"not an expression: {e!r}")


def expression_locals(e: Expression) -> set[str]:
    if isinstance(e, Local):
        return {e.name}
    if isinstance(e, Lit):
        return set()
    if isinstance(e, Cmp):
        return expression_locals(e.lhs) | expression_locals(e.rhs)
    if isinstance(e, AnyOf):
        return set().union(*(expression_locals(p) for p in e.parts))
    if isinstance(e, IfThenElse):
        return expression_locals(e.cond) | expression_locals(e.then) | expression_locals(e.orelse)
    raise TypeError(f"not an expression: {e!r}")


# --------------------------------------------------------------------------
# Instructions and programs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PickNonZero:
    target: str


@dataclass(frozen=True)
class WriteReg:
    register: str
    source: str


@dataclass(frozen=True)
class ReadReg:
    target: str
    register: str


@dataclass(frozen=True)
class ComputeReturn:
    target: str
    expr: Expression


Instruction = Union[PickNonZero, WriteReg, ReadReg, ComputeReturn]


@dataclass(frozen=True)
class LocalDecl:
    name: str
    type: str = NAT
    initial: int = 0


@dataclass(frozen=True)
class Process:
    instructions: tuple[Instruction, ...]
    locals: tuple[LocalDecl, ...]
    register: str
    register_initial: int = 0

    @property
    def final_pc(self) -> int:
        return len(self.instructions) + 1

    def local_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.locals)


@dataclass(frozen=True)
class Protocol:
    processes: tuple[Process, Process]

    @property
    def registers(self) -> tuple[str, ...]:
        return tuple(p.register for p in self.processes)

    def register_initial(self, name: str) -> int:
        for p in self.processes:
            if p.register == name:
                return p.register_initial
        raise KeyError(name)


def decision(v: str, n: str) -> Expression:
    """Kishon's line-4 rule: 0 on v=0 or v=n, 1 on v<n, else -1."""
    return IfThenElse(
        AnyOf((Cmp("=", Local(v), Lit(0)), Cmp("=", Local(v), Local(n)))),
        Lit(0),
        IfThenElse(Cmp("<", Local(v), Local(n)), Lit(1), Lit(-1)),
    )


def kishon_protocol() -> Protocol:
    procs = []
    for i in (0, 1):
        n, v, val = f"n_{i}", f"v_{i}", f"val_{i}"
        own, other = f"R_{i}", f"R_{1 - i}"
        procs.append(
            Process(
                instructions=(
                    PickNonZero(n),
                    WriteReg(own, n),
                    ReadReg(v, other),
                    ComputeReturn(val, decision(v, n)),
                ),
                locals=(LocalDecl(n), LocalDecl(v), LocalDecl(val, RET)),
                register=own,
            )
        )
    return Protocol(tuple(procs))


def validate_protocol(p: Protocol) -> list[str]:
    """Return the list of violations; empty means the protocol is well formed."""
    problems: list[str] = []
    if len(p.processes) != 2:
        problems.append(f"shape: expected 2 processes, got {len(p.processes)}")
    registers = set(p.registers)
    if len(registers) != len(p.registers):
        problems.append("single-writer: two processes own the same register")
    for i, proc in enumerate(p.processes):
        names = proc.local_names()
        if len(set(names)) != len(names):
            problems.append(f"declaration: process {i} declares a local twice")
        declared = set(names)
        for d in proc.locals:
            if d.type not in (NAT, RET):
                problems.append(f"declaration: process {i} local {d.name} has unknown type {d.type!r}")
        for k, ins in enumerate(proc.instructions, start=1):
            where = f"process {i} line {k}"
            if isinstance(ins, PickNonZero):
                used = {ins.target}
            elif isinstance(ins, WriteReg):
                used = {ins.source}
                if ins.register != proc.register:
                    problems.append(f"single-writer: {where} writes {ins.register}, owns {proc.register}")
            elif isinstance(ins, ReadReg):
                used = {ins.target}
                if ins.register not in registers:
                    problems.append(f"declaration: {where} reads undeclared register {ins.register}")
            elif isinstance(ins, ComputeReturn):
                used = {ins.target} | expression_locals(ins.expr)
            else:
                problems.append(f"straight-line: {where} is not a straight-line instruction: {ins!r}")
                continue
            for name in sorted(used - declared):
                problems.append(f"declaration: {where} references undeclared local {name}")
    return problems


def _expr_json(e: Expression) -> object:
    if isinstance(e, Local):
        return e.name
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Cmp):
        return [e.op, _expr_json(e.lhs), _expr_json(e.rhs)]
    if isinstance(e, AnyOf):
        return ["or", *(_expr_json(x) for x in e.parts)]
    return ["if", _expr_json(e.cond), _expr_json(e.then), _expr_json(e.orelse)]


def protocol_to_json(p: Protocol) -> dict:
    out = []
    for proc in p.processes:
        lines = []
        for ins in proc.instructions:
            if isinstance(ins, PickNonZero):
                lines.append({"op": "pick", "target": ins.target})
            elif isinstance(ins, WriteReg):
                lines.append({"op": "write", "register": ins.register, "source": ins.source})
            elif isinstance(ins, ReadReg):
                lines.append({"op": "read", "target": ins.target, "register": ins.register})
            else:
                lines.append({"op": "compute", "target": ins.target, "expr": _expr_json(ins.expr)})
        out.append(
            {
                "register": proc.register,
                "register_initial": proc.register_initial,
                "locals": [{"name": d.name, "type": d.type, "initial": d.initial} for d in proc.locals],
                "instructions": lines,
            }
        )
    return {"processes": out}
