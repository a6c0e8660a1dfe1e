"""Machine-readable check results shared by every checker and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

PASS = "pass"
FAIL = "fail"
ERROR = "error"


@dataclass
class Verdict:
    check: str
    params: dict[str, Any] = field(default_factory=dict)
    result: str = PASS
    counterexample: Optional[dict[str, Any]] = None
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.result == PASS

    def fail(self, counterexample: Optional[dict[str, Any]]) -> "Verdict":
        """Mark as failed, keeping the first counterexample seen."""
        if self.result != FAIL:
            self.result = FAIL
            self.counterexample = counterexample
        return self

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.check, "params": self.params, "result": self.result}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        out["stats"] = self.stats
        return out

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Verdict":
        return cls(
            check=d["check"],
            params=dict(d.get("params", {})),
            result=d["result"],
            counterexample=d.get("counterexample"),
            stats=dict(d.get("stats", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "Verdict":
        return cls.from_dict(json.loads(text))
