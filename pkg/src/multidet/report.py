"""Structured check reports.

Every validator in the package returns a Report: a list of items, one per
checked cell/equation/battery entry, each carrying a verdict.  The overall
status is a pure function of the items, so exit codes and JSON output are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

OK = "ok"
FAIL = "fail"
WARN = "warn"
SKIP = "skip"
ERROR = "error"


@dataclass(frozen=True)
class ReportItem:
    check: str
    location: str
    verdict: str
    detail: str = ""


@dataclass
class Report:
    command: str
    items: list = field(default_factory=list)
    timing: float = 0.0

    def add(self, check, location, verdict, detail=""):
        self.items.append(ReportItem(check, str(location), verdict, detail))

    def ok(self, check, location, detail=""):
        self.add(check, location, OK, detail)

    def fail(self, check, location, detail=""):
        self.add(check, location, FAIL, detail)

    def warn(self, check, location, detail=""):
        self.add(check, location, WARN, detail)

    def skip(self, check, location, detail=""):
        self.add(check, location, SKIP, detail)

    def extend(self, other: "Report", prefix=""):
        for it in other.items:
            loc = f"{prefix}{it.location}" if prefix else it.location
            self.items.append(ReportItem(it.check, loc, it.verdict, it.detail))

    @property
    def failures(self):
        return [it for it in self.items if it.verdict == FAIL]

    @property
    def status(self):
        if any(it.verdict == ERROR for it in self.items):
            return "error"
        if any(it.verdict == FAIL for it in self.items):
            return "invalid"
        if all(it.verdict == SKIP for it in self.items) or not self.items:
            return "vacuous"
        return "valid"

    @property
    def valid(self):
        return self.status == "valid"

    def sort(self):
        self.items.sort(key=lambda it: (it.check, it.location, it.verdict))
        return self

    def to_json_dict(self):
        # Timing is deliberately excluded: JSON reports must be byte-identical
        # across runs with equal inputs and seeds.
        return {
            "command": self.command,
            "status": self.status,
            "items": [
                {
                    "check": it.check,
                    "location": it.location,
                    "verdict": it.verdict,
                    "detail": it.detail,
                }
                for it in self.items
            ],
        }

    def summary(self, max_items=25):
        lines = [f"[{self.status}] {self.command} ({len(self.items)} checks)"]
        shown = 0
        for it in self.items:
            if it.verdict in (FAIL, ERROR, WARN):
                lines.append(f"  {it.verdict.upper()} {it.check} @ {it.location}"
                             + (f": {it.detail}" if it.detail else ""))
                shown += 1
                if shown >= max_items:
                    lines.append(f"  ... ({len(self.failures)} failures total)")
                    break
        return "\n".join(lines)

    def exit_code(self):
        return {"valid": 0, "vacuous": 0, "invalid": 1, "error": 2}[self.status]
