"""Verification report container shared by the smoothing and entire modules."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class BoundReport:
    """Pointwise check of ``lhs[i] <= rhs[i]`` over a grid.

    ``max_violation`` is the largest ``lhs - rhs`` (negative means margin);
    ``passed`` holds iff ``max_violation <= tolerance``.  ``labels`` names
    each entry when several inequalities are stacked into one report.
    """

    grid: list[float] = field(default_factory=list)
    lhs: list[float] = field(default_factory=list)
    rhs: list[float] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)
    tolerance: float = 0.0
    notes: str = ""

    def add(self, x: float, lhs: float, rhs: float, label: str = "") -> None:
        self.grid.append(float(x))
        self.lhs.append(float(lhs))
        self.rhs.append(float(rhs))
        self.labels.append(label)

    @property
    def max_violation(self) -> float:
        if not self.lhs:
            return float("-inf")
        return max(l - r for l, r in zip(self.lhs, self.rhs))

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    def worst(self) -> tuple[float, str]:
        """Worst grid point and its label."""
        if not self.lhs:
            return float("nan"), ""
        i = max(range(len(self.lhs)), key=lambda j: self.lhs[j] - self.rhs[j])
        return self.grid[i], self.labels[i]

    def to_dict(self) -> dict:
        return {
            "grid": self.grid,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "labels": self.labels,
            "tolerance": self.tolerance,
            "max_violation": self.max_violation,
            "pass": self.passed,
            "notes": self.notes,
        }
