"""Verification reports shared by every checker and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    cases: int = 0
    counterexample: dict | None = None
    detail: str = ""

    def render(self) -> str:
        status = "pass" if self.passed else "FAIL"
        line = f"  {self.name:<36} {status}"
        if self.cases:
            line += f"  ({self.cases} cases)"
        if self.detail:
            line += f"  {self.detail}"
        if not self.passed and self.counterexample:
            cx = ", ".join(f"{k}={v}" for k, v in self.counterexample.items())
            line += f"\n      counterexample: {cx}"
        return line


@dataclass
class Report:
    command: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    error: str | None = None
    elapsed: float = 0.0

    def add(self, name, passed, cases=0, counterexample=None, detail="") -> Check:
        passed = bool(passed)
        if not passed and not counterexample:
            # a failing verdict must always carry a counterexample
            counterexample = {"detail": detail or name}
        check = Check(name, passed, int(cases), counterexample, detail)
        self.checks.append(check)
        return check

    def note(self, text: str) -> None:
        self.notes.append(text)

    def merge(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.cases, c.counterexample, c.detail))
        self.notes.extend(other.notes)
        if other.error and not self.error:
            self.error = other.error

    @property
    def verdict(self) -> str:
        if self.error:
            return "error"
        return "pass" if all(c.passed for c in self.checks) else "fail"

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "error": 2}[self.verdict]

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def render(self) -> str:
        lines = [f"== {self.command}"]
        lines.extend(c.render() for c in self.checks)
        lines.extend(f"  | {n}" for n in self.notes)
        if self.error:
            lines.append(f"  error: {self.error}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)
