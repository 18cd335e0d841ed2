"""Pass/fail records shared by the verifiers and the command line."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"CHECK {self.name} {status} {self.detail}".rstrip()


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome with an optional witness of failure."""

    ok: bool
    witness: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def render(checks: Iterable[Check], as_json: bool = False) -> str:
    ordered = sorted(checks, key=lambda c: c.name)
    if as_json:
        doc = {
            "ok": all(c.ok for c in ordered),
            "checks": [{"name": c.name, "status": "PASS" if c.ok else "FAIL", "detail": c.detail} for c in ordered],
        }
        return json.dumps(doc, indent=2, sort_keys=True)
    return "\n".join(c.line() for c in ordered)
