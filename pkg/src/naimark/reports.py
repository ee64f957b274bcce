"""Verification reports: named metrics with PASS / FAIL / INFO verdicts."""

from dataclasses import dataclass, field

PASS, FAIL, INFO = "PASS", "FAIL", "INFO"


@dataclass
class Check:
    name: str
    value: float
    tolerance: float = None
    verdict: str = INFO

    def as_dict(self):
        d = {"name": self.name, "value": self.value, "verdict": self.verdict}
        if self.tolerance is not None:
            d["tolerance"] = self.tolerance
        return d


@dataclass
class Report:
    check: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def bound(self, name, value, tol):
        """Record ``value`` as PASS iff it is at most ``tol``."""
        value = float(value)
        verdict = PASS if value <= tol else FAIL
        self.checks.append(Check(name, value, float(tol), verdict))
        return verdict == PASS

    def info(self, name, value):
        self.checks.append(Check(name, _plain(value)))

    def extend(self, other, prefix=""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.value, c.tolerance, c.verdict))
        for k, v in other.data.items():
            self.data[prefix + k] = v

    @property
    def passed(self):
        return all(c.verdict != FAIL for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if c.verdict == FAIL]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c.value
        raise KeyError(name)

    def summary(self):
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.check}"]
        for c in self.checks:
            if c.tolerance is None:
                lines.append(f"  {c.verdict:4s} {c.name} = {_fmt(c.value)}")
            else:
                lines.append(
                    f"  {c.verdict:4s} {c.name} = {_fmt(c.value)} (tol {c.tolerance:.1e})"
                )
        return "\n".join(lines)


def _plain(value):
    if isinstance(value, complex):
        return value.real if value.imag == 0 else [value.real, value.imag]
    if hasattr(value, "item"):
        return _plain(value.item())
    return value


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)
