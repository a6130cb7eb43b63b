"""Verification report objects with deterministic serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class CheckRecord:
    id: str
    indices: tuple = ()
    status: str = "pass"  # "pass" | "fail"
    detail: str | None = None

    def as_dict(self):
        d = {"id": self.id, "indices": list(self.indices), "status": self.status}
        if self.detail is not None:
            d["detail"] = self.detail
        return d


@dataclass
class VerificationReport:
    suite: str
    config: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    runtime_ms: int = 0

    def record(self, check_id, ok, indices=(), detail=None):
        self.checks.append(
            CheckRecord(check_id, tuple(indices), "pass" if ok else "fail", None if ok else detail)
        )

    def merge(self, other):
        self.checks.extend(other.checks)

    @property
    def n_pass(self):
        return sum(1 for c in self.checks if c.status == "pass")

    @property
    def n_fail(self):
        return sum(1 for c in self.checks if c.status != "pass")

    def ok(self):
        return self.n_fail == 0

    def sort(self):
        self.checks.sort(key=lambda c: (c.id, c.indices))
        return self

    def as_dict(self, with_runtime=True):
        d = {
            "suite": self.suite,
            "config": dict(sorted(self.config.items())),
            "checks": [c.as_dict() for c in self.checks],
            "summary": {"pass": self.n_pass, "fail": self.n_fail},
        }
        if with_runtime:
            d["runtime_ms"] = self.runtime_ms
        return d

    def to_json(self, with_runtime=True):
        return json.dumps(self.as_dict(with_runtime), indent=2, sort_keys=False) + "\n"

    def to_text(self):
        lines = [f"suite {self.suite}"]
        for k, v in sorted(self.config.items()):
            lines.append(f"  config {k} = {v}")
        for c in self.checks:
            idx = ",".join(str(i) for i in c.indices)
            tag = f"[{idx}]" if idx else ""
            lines.append(f"  {c.status.upper():4s} {c.id}{tag}")
            if c.detail:
                lines.append(f"       {c.detail}")
        lines.append(f"  summary: {self.n_pass} passed, {self.n_fail} failed")
        return "\n".join(lines) + "\n"


def report_from_dict(d):
    rep = VerificationReport(d["suite"], dict(d.get("config", {})))
    for c in d.get("checks", []):
        rep.checks.append(
            CheckRecord(c["id"], tuple(c.get("indices", [])), c["status"], c.get("detail"))
        )
    rep.runtime_ms = d.get("runtime_ms", 0)
    return rep
