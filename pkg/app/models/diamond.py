"""
Diamond operators and the functions they induce on sets of time points.
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from app.core.exceptions import KBValidationError
from app.models.interval_set import NEG_INF, POS_INF, Interval, IntervalSet


class DiamondKind(str, Enum):
    """Diamond operator kinds, valued by their concrete syntax keyword"""
    PAST = "diaP"
    FUTURE = "diaF"
    ANY_TIME = "diaPF"
    CONVEX = "conv"
    CONVEX_N = "convn"


@dataclass(frozen=True)
class DiamondOp:
    kind: DiamondKind
    n: Optional[int] = None

    def __post_init__(self):
        if self.kind == DiamondKind.CONVEX_N:
            if self.n is None or self.n < 1:
                raise KBValidationError(f"conv[n] requires a positive integer n, got {self.n}")
        elif self.n is not None:
            raise KBValidationError(f"{self.kind.value} takes no bound")

    @classmethod
    def past(cls) -> "DiamondOp":
        return cls(DiamondKind.PAST)

    @classmethod
    def future(cls) -> "DiamondOp":
        return cls(DiamondKind.FUTURE)

    @classmethod
    def any_time(cls) -> "DiamondOp":
        return cls(DiamondKind.ANY_TIME)

    @classmethod
    def convex(cls, n: Optional[int] = None) -> "DiamondOp":
        if n is None:
            return cls(DiamondKind.CONVEX)
        return cls(DiamondKind.CONVEX_N, n)

    def keyword(self) -> str:
        if self.kind == DiamondKind.CONVEX_N:
            return f"conv[{self.n}]"
        return self.kind.value

    def __str__(self) -> str:
        return self.keyword()


def apply_diamond(op: DiamondOp, m: IntervalSet) -> IntervalSet:
    """
    Closed form of the function induced by a diamond operator.

    Args:
        op: the diamond operator
        m: canonical set of time points

    Returns:
        ◇M as a canonical IntervalSet (empty for empty M)
    """
    if m.is_empty():
        return m
    if op.kind == DiamondKind.ANY_TIME:
        return IntervalSet.full()
    if op.kind == DiamondKind.FUTURE:
        return IntervalSet(((NEG_INF, m.max),))
    if op.kind == DiamondKind.PAST:
        return IntervalSet(((m.min, POS_INF),))
    if op.kind == DiamondKind.CONVEX:
        return IntervalSet(((m.min, m.max),))

    # single pass: witnesses are original points, so filled gaps never enable further fills
    filled: List[Interval] = [m.intervals[0]]
    for lo, hi in m.intervals[1:]:
        prev_lo, prev_hi = filled[-1]
        if lo - prev_hi < op.n:
            filled[-1] = (prev_lo, hi)
        else:
            filled.append((lo, hi))
    return IntervalSet(tuple(filled))
