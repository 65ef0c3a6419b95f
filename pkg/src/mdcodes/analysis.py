"""Closed-form parameter thresholds and exact small-instance redundancy tables."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable

from .boxes import box_constant
from .errors import BudgetExceededError
from .oracles import DEFAULT_BUDGET, ConstraintParams, exhaustive_count, redundancy

_EPS = 1e-9


def _log(x: float, q: int) -> float:
    return math.log(x) / math.log(q)


def least_integer_at_least(x: float) -> int:
    r = round(x)
    return int(r) if abs(x - r) < _EPS else math.ceil(x)


def threshold_L_zero_free(n: int, d: int, q: int = 2) -> float:
    """Smallest real L for which the union bound leaves at least q^(n^d - 1) zero-cube-free arrays."""
    return (d * _log(n, q) + _log(q / (q - 1), q)) ** (1 / d)


def threshold_L_unique(n: int, d: int, q: int = 2) -> float:
    """As :func:`threshold_L_zero_free` but counting pairs of positions (n^(2d) choices)."""
    return (2 * d * _log(n, q) + _log(q / (q - 1), q)) ** (1 / d)


def _box_tail(n: int, d: int, q: int) -> float:
    loglog = _log(_log(n, q), q) if d > 1 else 0.0
    C = _log(box_constant(d) * (d + 1) ** ((d - 1) / d), q)
    return (d - 1) / d * loglog + C + _log(q / (q - 1), q)


def threshold_V_zero_free(n: int, d: int, q: int = 2) -> float:
    """d log_q n + (d-1)/d log_q log_q n + O(1), with the O(1) spelled out as in the counting proof."""
    return d * _log(n, q) + _box_tail(n, d, q)


def threshold_V_unique(n: int, d: int, q: int = 2) -> float:
    return 2 * d * _log(n, q) + _box_tail(n, d, q)


_THRESHOLDS = {
    "zero-cubes-free": (threshold_L_zero_free, "union bound over n^d cube positions"),
    "cubes-unique": (threshold_L_unique, "union bound over n^(2d) position pairs"),
    "zero-boxes-free": (
        threshold_V_zero_free,
        "union bound over n^d positions and C_d V^((d-1)/d) minimal shapes; O(1) = log_q(C_d (d+1)^((d-1)/d)) + log_q(q/(q-1))",
    ),
    "boxes-unique": (
        threshold_V_unique,
        "union bound over n^(2d) position pairs and minimal shapes; same O(1) instantiation",
    ),
}


@dataclass(frozen=True)
class ThresholdReport:
    family: str
    d: int
    q: int
    n: int
    value: float
    minimal: int
    tag: str

    @property
    def param(self) -> str:
        return "L" if "cubes" in self.family else "V"

    def lines(self) -> list[str]:
        out = [f"{self.value:.6f}/{self.minimal}", f"{self.param} >= {self.value:.6f}; basis: {self.tag}"]
        if self.param == "L":
            out.append("note: a rate-one code needs L to grow with n; that condition has no finite-n check")
        return out


def threshold(family: str, n: int, d: int, q: int = 2) -> ThresholdReport:
    fn, tag = _THRESHOLDS[family]
    value = fn(n, d, q)
    return ThresholdReport(family, d, q, n, value, least_integer_at_least(value), tag)


@dataclass
class RedundancyRow:
    params: ConstraintParams
    count: int | None  # None when the instance exceeded the budget
    redundancy: float | None
    seconds: float

    @property
    def skipped(self) -> bool:
        return self.count is None

    def csv(self) -> str:
        p = self.params
        if self.skipped:
            return f"{p.family},{p.d},{p.q},{p.n},{p.size},skipped,,{self.seconds:.3f}"
        red = "inf" if math.isinf(self.redundancy) else f"{self.redundancy:.6g}"
        return f"{p.family},{p.d},{p.q},{p.n},{p.size},{self.count},{red},{self.seconds:.3f}"


CSV_HEADER = "family,d,q,n,param,count,redundancy,seconds"


def redundancy_table(
    family: str,
    d: int,
    q: int,
    ns: Iterable[int],
    param: int | Callable[[int], int],
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> list[RedundancyRow]:
    """Exact counts for every n; instances over budget become skipped rows."""
    rule = param if callable(param) else (lambda n, v=param: v)
    rows = []
    for n in sorted(ns):
        p = ConstraintParams(family, d, q, n, rule(n))
        t0 = time.perf_counter()
        try:
            c = exhaustive_count(p, budget=budget, workers=workers)
        except BudgetExceededError:
            rows.append(RedundancyRow(p, None, None, time.perf_counter() - t0))
            continue
        rows.append(RedundancyRow(p, c, redundancy(p, c), time.perf_counter() - t0))
    return rows
