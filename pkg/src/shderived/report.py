from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graded import Elem


@dataclass
class Witness:
    input: tuple
    lhs: Elem
    rhs: Elem
    label: str = ""

    def as_dict(self):
        return {
            "label": self.label,
            "input": [repr(x) for x in self.input],
            "lhs": serialize_elem(self.lhs),
            "rhs": serialize_elem(self.rhs),
        }


@dataclass
class VerificationReport:
    """Outcome of one exhaustive check, always qualified by its cutoffs.

    ``status`` is ``"pass"`` exactly when ``witnesses`` is empty.  Only the first
    ``max_witnesses`` failures are kept; ``failures`` counts all of them.
    """

    suite: str
    checks: int = 0
    witnesses: list = field(default_factory=list)
    cutoffs: dict = field(default_factory=dict)
    failures: int = 0
    notes: list = field(default_factory=list)
    max_witnesses: int = 5

    @property
    def status(self):
        return "pass" if not self.witnesses else "fail"

    @property
    def passed(self):
        return not self.witnesses

    def record(self, inp, lhs, rhs, label=""):
        """Count one comparison; keep a witness when the two sides differ."""
        self.checks += 1
        if lhs != rhs:
            self.failures += 1
            if len(self.witnesses) < self.max_witnesses:
                self.witnesses.append(Witness(tuple(inp), lhs, rhs, label))
            return False
        return True

    def merge(self, other, prefix=""):
        self.checks += other.checks
        self.failures += other.failures
        for w in other.witnesses:
            if len(self.witnesses) < self.max_witnesses:
                label = f"{prefix}{other.suite}: {w.label}".rstrip(": ")
                self.witnesses.append(Witness(w.input, w.lhs, w.rhs, label))
        self.notes.extend(other.notes)
        return self

    def as_dict(self):
        return {
            "suite": self.suite,
            "status": self.status,
            "checks": self.checks,
            "failures": self.failures,
            "cutoffs": dict(sorted(self.cutoffs.items())),
            "witnesses": [w.as_dict() for w in self.witnesses],
            "notes": list(self.notes),
        }

    def to_text(self):
        cut = ", ".join(f"{k}={v}" for k, v in sorted(self.cutoffs.items()))
        lines = [f"[{self.status.upper()}] {self.suite}: {self.checks} checks ({cut})"]
        for w in self.witnesses:
            lines.append(f"  witness {w.label} on ({', '.join(map(repr, w.input))}):")
            lines.append(f"    lhs = {w.lhs!r}")
            lines.append(f"    rhs = {w.rhs!r}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)

    def __str__(self):
        return self.to_text()


def serialize_elem(e: Elem):
    return [[str(c), [repr(x) for x in w]] for w, c in e.items()]


def reports_to_json(reports) -> str:
    return json.dumps({"reports": [r.as_dict() for r in reports],
                       "status": "pass" if all(r.passed for r in reports) else "fail"},
                      indent=2, sort_keys=False)
