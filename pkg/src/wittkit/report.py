"""Verdict records shared by every module that reports on axioms/criteria."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Verdict(str, Enum):
    PASS = "Pass"
    FAIL = "Fail"
    INCONCLUSIVE = "Inconclusive"
    DECLARED = "Declared"


class Provenance(str, Enum):
    PAPER = "paper"
    EXTERNAL = "external-standard"
    DECLARED = "declared"


@dataclass(frozen=True)
class Check:
    name: str
    verdict: Verdict
    provenance: Provenance
    detail: str = ""
    data: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "name": self.name,
            "verdict": self.verdict.value,
            "provenance": self.provenance.value,
            "detail": self.detail,
        }
        if self.data:
            out["data"] = self.data
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    payload: dict = field(default_factory=dict)

    def add(self, name, verdict, provenance, detail="", **data) -> Check:
        c = Check(name, Verdict(verdict), Provenance(provenance), detail, data)
        self.checks.append(c)
        return c

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        """No check failed or stayed inconclusive (declarations are fine)."""
        return all(c.verdict in (Verdict.PASS, Verdict.DECLARED) for c in self.checks)

    @property
    def verdict(self) -> Verdict:
        if any(c.verdict is Verdict.FAIL for c in self.checks):
            return Verdict.FAIL
        if any(c.verdict is Verdict.INCONCLUSIVE for c in self.checks):
            return Verdict.INCONCLUSIVE
        return Verdict.PASS

    def to_json(self):
        return {
            "title": self.title,
            "verdict": self.verdict.value,
            "checks": [c.to_json() for c in self.checks],
            "payload": self.payload,
        }
