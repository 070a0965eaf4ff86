from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckRecord:
    relation: str
    indices: Any
    residual: str
    passed: bool

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "indices": self.indices,
            "residual": self.residual,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    """Outcome of an identity check.  A nonzero residual is recorded, never raised.

    With ``keep_passing=False`` only failing records are stored; per-relation
    counts are always kept in ``counts``.
    """

    name: str
    records: list[CheckRecord] = field(default_factory=list)
    counts: dict[str, list[int]] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)
    keep_passing: bool = True

    def add(self, relation: str, indices, residual, passed: bool | None = None) -> bool:
        if passed is None:
            passed = _is_zero(residual)
        tally = self.counts.setdefault(relation, [0, 0])
        tally[0 if passed else 1] += 1
        if self.keep_passing or not passed:
            text = residual if isinstance(residual, str) else str(residual)
            self.records.append(CheckRecord(relation, _jsonable(indices), text, passed))
        return passed

    def merge(self, other: VerificationReport) -> VerificationReport:
        self.records.extend(other.records)
        for rel, (ok, bad) in other.counts.items():
            tally = self.counts.setdefault(rel, [0, 0])
            tally[0] += ok
            tally[1] += bad
        return self

    @property
    def passed(self) -> bool:
        return all(bad == 0 for _, bad in self.counts.values())

    @property
    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def relation_passed(self, relation: str) -> bool:
        ok, bad = self.counts.get(relation, (0, 0))
        return ok > 0 and bad == 0

    def to_dict(self) -> dict:
        return {
            "report": self.name,
            "pass": self.passed,
            "counts": {k: {"pass": v[0], "fail": v[1]} for k, v in sorted(self.counts.items())},
            "meta": self.meta,
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    def summary(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for rel, (ok, bad) in sorted(self.counts.items()):
            lines.append(f"  {rel}: {ok} passed, {bad} failed")
        return "\n".join(lines)


def _is_zero(residual) -> bool:
    if hasattr(residual, "is_zero"):
        return residual.is_zero()
    if isinstance(residual, str):
        return residual == "0"
    return residual == 0


def _jsonable(indices):
    if isinstance(indices, tuple):
        return [_jsonable(i) for i in indices]
    if isinstance(indices, list):
        return [_jsonable(i) for i in indices]
    return indices
