"""Command-line entry point: run any check and print a JSON verdict.

Usage::

    kishon check-invariant --bound 3
    kishon --check theorem33 --registers safe --bound 2
    kishon all --bound 2 --out verdict.json
    kishon enumerate-orders

Exit status is 0 on pass, 1 on fail and 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import bridge, executions, global_sem, nonrestricted, orders
from .executions import EVENTS, RegisterSemantics
from .verdict import ERROR, FAIL, PASS, Verdict

CHECKS = ("invariant", "theorem1", "theorem2", "theorem33", "lemmas", "nonrestricted", "bridge", "orders", "all")
COMMANDS = {
    "check-invariant": "invariant",
    "check-theorem1": "theorem1",
    "check-theorem2": "theorem2",
    "check-theorem33": "theorem33",
    "check-lemmas": "lemmas",
    "check-nonrestricted": "nonrestricted",
    "bridge-check": "bridge",
    "check-orders": "orders",
    "all": "all",
}
MAX_BOUND = 5
DEFAULTS = {"bound": 3, "registers": "regular", "process": None}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    check: str
    bound: int = 3
    registers: str = "regular"
    process: Optional[int] = None
    output_path: Optional[str] = None
    quiet: bool = False

    def __post_init__(self):
        if self.check not in CHECKS:
            raise ConfigError(f"unknown check {self.check!r}; expected one of {', '.join(CHECKS)}")
        if isinstance(self.bound, bool) or not isinstance(self.bound, int) or not 1 <= self.bound <= MAX_BOUND:
            raise ConfigError(f"bound must be an integer in 1..{MAX_BOUND}, got {self.bound!r}")
        try:
            RegisterSemantics(self.registers)
        except ValueError:
            raise ConfigError(f"unknown register semantics {self.registers!r}") from None
        if self.process not in (None, 0, 1):
            raise ConfigError(f"process must be 0 or 1, got {self.process!r}")


# --------------------------------------------------------------------------
# Checks
# --------------------------------------------------------------------------


def _invariant(c: RunConfig) -> Verdict:
    return global_sem.check_inductive_invariant(global_sem.phi_invariant(c.bound), bound=c.bound)


def _nonrestricted(c: RunConfig) -> Verdict:
    procs = (0, 1) if c.process is None else (c.process,)
    subs = [nonrestricted.check_alpha_invariant(c.bound, i) for i in procs]
    if len(subs) == 1:
        return subs[0]
    v = Verdict("nonrestricted", {"bound": c.bound, "process": "both"})
    for s in subs:
        if not s.passed:
            v.fail(s.counterexample)
    v.stats = {f"process_{i}": s.stats for i, s in zip(procs, subs)}
    return v


def check_orders() -> Verdict:
    t0 = time.perf_counter()
    v = Verdict("orders", {"chain_length": 4})
    found = orders.enumerate_two_chain_orders(4)
    for p in found:
        if not (orders.is_strict_partial_order(p) and orders.is_russell_wiener(p)):
            v.fail({"reason": "not an interval order", "order": p.to_json(EVENTS)})
        if orders.realize_intervals(p).precedence() != p:
            v.fail({"reason": "interval realization does not round-trip", "order": p.to_json(EVENTS)})
        if not executions.check_concurrency_lemma(p):
            v.fail({"reason": "concurrency lemma fails", "order": p.to_json(EVENTS)})
    v.stats = {"interleavings": 12870, "orders": len(found), "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3)}
    return v


RUNNERS: dict[str, Callable[[RunConfig], Verdict]] = {
    "invariant": _invariant,
    "theorem1": lambda c: global_sem.check_theorem1(c.bound),
    "theorem2": lambda c: global_sem.check_theorem2(c.bound),
    "theorem33": lambda c: executions.check_theorem33(c.bound, c.registers),
    "lemmas": lambda c: executions.check_lemmas(c.bound, c.registers),
    "nonrestricted": _nonrestricted,
    "bridge": lambda c: bridge.check_seriality_theorem(c.bound),
    "orders": lambda c: check_orders(),
}


def all_subchecks(bound: int) -> list[tuple[str, RunConfig, str]]:
    """``(name, config, expected result)`` for the aggregate run.

    Safe registers are expected to break the theorem once a read can return a
    value other than 0 and the picked numbers, which takes ``bound >= 2``.
    """
    subs = [
        ("invariant", RunConfig("invariant", bound), PASS),
        ("theorem1", RunConfig("theorem1", bound), PASS),
        ("theorem2", RunConfig("theorem2", bound), PASS),
        ("theorem33[serial]", RunConfig("theorem33", bound, "serial"), PASS),
        ("theorem33[regular]", RunConfig("theorem33", bound, "regular"), PASS),
        ("theorem33[safe]", RunConfig("theorem33", bound, "safe"), FAIL if bound >= 2 else PASS),
        ("lemmas", RunConfig("lemmas", bound), PASS),
        ("nonrestricted", RunConfig("nonrestricted", bound), PASS),
        ("bridge", RunConfig("bridge", bound), PASS),
        ("orders", RunConfig("orders", bound), PASS),
    ]
    return subs


def run(config: RunConfig) -> Verdict:
    t0 = time.perf_counter()
    if config.check != "all":
        v = RUNNERS[config.check](config)
        v.params = {"bound": config.bound, **v.params}
        return v
    v = Verdict("all", {"bound": config.bound})
    summary = {}
    for name, sub, expected in all_subchecks(config.bound):
        got = RUNNERS[sub.check](sub)
        ok = got.result == expected
        summary[name] = {"result": got.result, "expected": expected, "ok": ok}
        if not ok:
            v.fail({"subcheck": name, "verdict": got.to_dict()})
    v.stats = {"subchecks": summary, "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3)}
    return v


# --------------------------------------------------------------------------
# Argument handling
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kishon", description="Bounded verification of Kishon's Poker.")
    ap.add_argument("command", nargs="?", choices=sorted([*COMMANDS, "enumerate-orders"]),
                    help="check to run (alternative to --check)")
    ap.add_argument("--check", choices=CHECKS)
    ap.add_argument("--bound", type=int, help=f"value bound N (1..{MAX_BOUND})")
    ap.add_argument("--registers", choices=[s.value for s in RegisterSemantics])
    ap.add_argument("--process", type=int, choices=(0, 1))
    ap.add_argument("--config", help="JSON file with any of: check, bound, registers, process, output_path")
    ap.add_argument("--out", help="also write the output to this file")
    ap.add_argument("--quiet", action="store_true", help="do not print to stdout")
    return ap


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(loaded) - {"check", "bound", "registers", "process", "output_path"}
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        values.update(loaded)
    if args.command and args.command != "enumerate-orders":
        values["check"] = COMMANDS[args.command]
    if args.check:
        values["check"] = args.check
    for key in ("bound", "registers", "process"):
        if getattr(args, key) is not None:
            values[key] = getattr(args, key)
    if args.out:
        values["output_path"] = args.out
    if "check" not in values:
        raise ConfigError("no check given; pass a command or --check")
    return RunConfig(
        check=values["check"],
        bound=values["bound"],
        registers=values["registers"],
        process=values["process"],
        output_path=values.get("output_path"),
        quiet=args.quiet,
    )


def _emit(text: str, path: Optional[str], quiet: bool) -> None:
    if not quiet:
        sys.stdout.write(text)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def enumerate_orders_lines() -> list[str]:
    found = orders.enumerate_two_chain_orders(4)
    lines = []
    for k, p in enumerate(found):
        iv = orders.realize_intervals(p)
        lines.append(json.dumps({
            "index": k,
            "precedence": p.to_json(EVENTS),
            "intervals": {e: [iv.left[i], iv.right[i]] for i, e in enumerate(EVENTS)},
        }))
    lines.append(json.dumps({"summary": {"interleavings": 12870, "orders": len(found)}}))
    return lines


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "enumerate-orders":
        _emit("\n".join(enumerate_orders_lines()) + "\n", args.out, args.quiet)
        return 0
    try:
        config = resolve_config(args)
    except ConfigError as exc:
        err = Verdict("config", {}, ERROR, stats={"message": str(exc)})
        sys.stderr.write(err.to_json() + "\n")
        return 2
    verdict = run(config)
    _emit(verdict.to_json() + "\n", config.output_path, config.quiet)
    return 0 if verdict.passed else 1


if __name__ == "__main__":
    sys.exit(main())
