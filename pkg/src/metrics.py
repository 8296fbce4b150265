from collections import Counter
from typing import Dict

from src.solver import Verdict


class VerdictMetric:
    """Keeps track of verdict counts over a sweep"""

    def __init__(self) -> None:
        self.counts = Counter()
        self.failures = 0
        self.marginal = 0

    def update(self, tag: Verdict, marginal: bool = False) -> None:
        if tag is None:
            self.failures += 1
            return
        self.counts[Verdict(tag).value] += 1
        self.marginal += int(marginal)

    def compute(self) -> Dict[str, int]:
        out = {tag.value: self.counts.get(tag.value, 0) for tag in Verdict}
        out["failures"] = self.failures
        out["boundary_marginal"] = self.marginal
        return out

    def reset(self) -> None:
        self.counts = Counter()
        self.failures = 0
        self.marginal = 0


class ResidualMetric:
    """Keeps track of endpoint residuals over a sweep"""

    def __init__(self) -> None:
        self.worst = 0.0
        self.total = 0.0
        self.count = 0

    def update(self, residual: float) -> None:
        self.worst = max(self.worst, residual)
        self.total += residual
        self.count += 1

    def compute(self) -> Dict[str, float]:
        mean = self.total / self.count if self.count else 0.0
        return {"worst": self.worst, "mean": mean}

    def reset(self) -> None:
        self.worst = 0.0
        self.total = 0.0
        self.count = 0
