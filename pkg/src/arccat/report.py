"""Check results and machine-readable reports.

Every verification routine returns a :class:`CheckResult`: a named record of
how many cases were evaluated, which failed, and a re-runnable witness for
each failure.  Results aggregate into suite :class:`Report` objects that
serialize to JSON (the single report format; the CLI's text output is a
rendering of it).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List


def jsonable(value: Any) -> Any:
    """Coerce nested values (fractions, tuples, dataclass reprs) to JSON-safe data."""
    from fractions import Fraction

    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(jsonable(k)): jsonable(v) for k, v in value.items()}
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return repr(value)


@dataclass
class Failure:
    """A single violated law with enough data to reproduce it."""

    kind: str
    witness: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind, "witness": jsonable(self.witness)}


@dataclass
class CheckResult:
    """Outcome of one verification routine."""

    name: str
    params: Dict[str, Any] = field(default_factory=dict)
    checked: int = 0
    failures: List[Failure] = field(default_factory=list)
    notes: Dict[str, Any] = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, kind: str, **witness) -> None:
        self.failures.append(Failure(kind, witness))

    def merge(self, other: "CheckResult") -> None:
        self.checked += other.checked
        self.failures.extend(other.failures)
        self.elapsed += other.elapsed

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "params": jsonable(self.params),
            "checked": self.checked,
            "ok": self.ok,
            "failures": [f.to_json() for f in self.failures],
            "notes": jsonable(self.notes),
            "elapsed_sec": round(self.elapsed, 3),
        }

    def __str__(self) -> str:
        status = "ok" if self.ok else f"FAIL ({len(self.failures)} violations)"
        return f"{self.name}: {status} [{self.checked} cases, {self.elapsed:.2f}s]"


class timed:
    """Context manager stamping elapsed time onto a CheckResult."""

    def __init__(self, result: CheckResult):
        self.result = result

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self.result

    def __exit__(self, *exc):
        self.result.elapsed += time.perf_counter() - self._t0
        return False


@dataclass
class Report:
    """Aggregated suite report."""

    suite: str
    config: Dict[str, Any] = field(default_factory=dict)
    results: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def failure_count(self) -> int:
        return sum(len(r.failures) for r in self.results)

    def to_json(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "config": jsonable(self.config),
            "ok": self.ok,
            "checks_run": len(self.results),
            "cases_checked": sum(r.checked for r in self.results),
            "failure_count": self.failure_count,
            "results": [r.to_json() for r in self.results],
            "elapsed_sec": round(sum(r.elapsed for r in self.results), 3),
        }

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")

    def render_text(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.ok else 'FAIL'}"]
        for r in self.results:
            lines.append("  " + str(r))
            for f in r.failures[:10]:
                lines.append(f"    {f.kind}: {json.dumps(f.to_json()['witness'])[:400]}")
            if len(r.failures) > 10:
                lines.append(f"    ... {len(r.failures) - 10} more failures")
        return "\n".join(lines)
