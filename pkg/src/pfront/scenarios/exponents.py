"""Exponent arithmetic for the head-on near-vacuum construction.

Four requirements on the data exponents (alpha, beta) of the oscillating
near-vacuum train: crossing in finite time, no breaking before the crossing,
bounded-then-unbounded variation, and no breaking after.  The last two are
incompatible (the third needs beta > 0, the fourth beta <= 0), so no pair of
exponents satisfies all four.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class ConditionVector:
    r1: bool   # 2*alpha/3 < 1: the shock crosses all 2-waves in finite time
    r2: bool   # 2*alpha - beta - 1 > 0: no breaking before the crossing
    r3: bool   # 0 < alpha/3 < beta < alpha < 1: BV data, divergent crossed sum
    r4: bool   # beta <= 0: gradients stay bounded after the crossing

    @property
    def all_satisfied(self) -> bool:
        return self.r1 and self.r2 and self.r3 and self.r4


def exponent_check(alpha: float, beta: float) -> ConditionVector:
    return ConditionVector(
        r1=2.0 * alpha / 3.0 < 1.0,
        r2=2.0 * alpha - beta - 1.0 > 0.0,
        r3=0.0 < alpha / 3.0 < beta < alpha < 1.0,
        r4=beta <= 0.0,
    )


def exponent_grid_scan(step: float = 0.01) -> dict:
    """Scan alpha, beta over (0,1)^2; count points satisfying each condition
    and all four together."""
    n = round(1.0 / step) - 1
    counts = {"r1": 0, "r2": 0, "r3": 0, "r4": 0, "all": 0, "points": 0}
    for i in range(1, n + 1):
        alpha = i * step
        for j in range(1, n + 1):
            beta = j * step
            v = exponent_check(alpha, beta)
            counts["points"] += 1
            counts["r1"] += v.r1
            counts["r2"] += v.r2
            counts["r3"] += v.r3
            counts["r4"] += v.r4
            counts["all"] += v.all_satisfied
    return counts
