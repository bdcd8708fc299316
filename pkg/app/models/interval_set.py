"""
Canonical finite unions of integer intervals with infinite endpoints.

Every temporal extension in the engine is carried by an IntervalSet. Values are
immutable; every operation returns a new canonical set.
"""
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

from app.core.exceptions import KBValidationError

Bound = Union[int, float]
Interval = Tuple[Bound, Bound]

NEG_INF: float = -math.inf
POS_INF: float = math.inf


def _check_bound(value: Bound) -> Bound:
    if isinstance(value, float):
        if not math.isinf(value):
            if not value.is_integer():
                raise KBValidationError(f"interval bound {value} is not an integer")
            return int(value)
    return value


def _canonicalize(raw: Iterable[Sequence[Bound]]) -> Tuple[Interval, ...]:
    intervals: List[Interval] = []
    for item in raw:
        if len(item) != 2:
            raise KBValidationError(f"malformed interval {list(item)!r}")
        lo, hi = _check_bound(item[0]), _check_bound(item[1])
        if lo > hi:
            raise KBValidationError(f"malformed interval [{lo},{hi}]: lower bound exceeds upper bound")
        if lo == POS_INF or hi == NEG_INF:
            raise KBValidationError(f"malformed interval [{lo},{hi}]: empty at infinity")
        intervals.append((lo, hi))
    intervals.sort()
    merged: List[Interval] = []
    for lo, hi in intervals:
        if merged and lo <= merged[-1][1] + 1:
            prev_lo, prev_hi = merged[-1]
            merged[-1] = (prev_lo, max(prev_hi, hi))
        else:
            merged.append((lo, hi))
    return tuple(merged)


@dataclass(frozen=True)
class IntervalSet:
    intervals: Tuple[Interval, ...] = ()

    @classmethod
    def of(cls, raw: Iterable[Sequence[Bound]]) -> "IntervalSet":
        """Build the canonical set (sorted, overlapping and adjacent intervals merged)."""
        return cls(_canonicalize(raw))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def full(cls) -> "IntervalSet":
        return cls(((NEG_INF, POS_INF),))

    @classmethod
    def point(cls, i: int) -> "IntervalSet":
        return cls(((i, i),))

    @classmethod
    def from_points(cls, points: Iterable[int]) -> "IntervalSet":
        return cls.of((p, p) for p in points)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __contains__(self, i: int) -> bool:
        return self.contains(i)

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return self.union(other)

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersect(other)

    def is_empty(self) -> bool:
        return not self.intervals

    def is_canonical(self) -> bool:
        for lo, hi in self.intervals:
            if lo > hi:
                return False
        for (_, prev_hi), (next_lo, _) in zip(self.intervals, self.intervals[1:]):
            if not next_lo > prev_hi + 1:
                return False
        return True

    @property
    def min(self) -> Bound:
        if not self.intervals:
            raise ValueError("empty interval set has no minimum")
        return self.intervals[0][0]

    @property
    def max(self) -> Bound:
        if not self.intervals:
            raise ValueError("empty interval set has no maximum")
        return self.intervals[-1][1]

    def contains(self, i: int) -> bool:
        # intervals are few; linear scan with early exit
        for lo, hi in self.intervals:
            if i < lo:
                return False
            if i <= hi:
                return True
        return False

    def union(self, other: "IntervalSet") -> "IntervalSet":
        if not other.intervals:
            return self
        if not self.intervals:
            return other
        return IntervalSet(_canonicalize(self.intervals + other.intervals))

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        result: List[Interval] = []
        a, b = self.intervals, other.intervals
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                result.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(result))

    def complement(self) -> "IntervalSet":
        """Complement within ℤ."""
        result: List[Interval] = []
        cursor: Bound = NEG_INF
        for lo, hi in self.intervals:
            if lo != NEG_INF and cursor <= lo - 1:
                result.append((cursor, lo - 1))
            cursor = hi + 1
        if cursor != POS_INF:
            result.append((cursor, POS_INF))
        return IntervalSet(tuple(result))

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersect(other.complement())

    def issubset(self, other: "IntervalSet") -> bool:
        return self.difference(other).is_empty()

    def endpoints(self) -> List[Bound]:
        return [bound for interval in self.intervals for bound in interval]

    def sample_points(self) -> List[int]:
        """One member per interval (the finite endpoint nearest to zero for half-lines)."""
        samples: List[int] = []
        for lo, hi in self.intervals:
            if lo != NEG_INF:
                samples.append(int(lo))
            elif hi != POS_INF:
                samples.append(int(hi))
            else:
                samples.append(0)
        return samples

    def points_within(self, lo: int, hi: int) -> List[int]:
        """All members inside the finite window [lo, hi]."""
        window = self.intersect(IntervalSet(((lo, hi),)))
        return [i for a, b in window.intervals for i in range(int(a), int(b) + 1)]

    def to_list(self) -> List[List[Union[int, str]]]:
        return [[render_bound(lo), render_bound(hi)] for lo, hi in self.intervals]

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return " ∪ ".join(f"[{render_bound(lo)},{render_bound(hi)}]" for lo, hi in self.intervals)


def render_bound(value: Bound) -> Union[int, str]:
    if value == NEG_INF:
        return "-inf"
    if value == POS_INF:
        return "inf"
    return int(value)


def parse_bound(value: Union[int, str]) -> Bound:
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("-inf", "-infinity"):
            return NEG_INF
        if text in ("inf", "+inf", "infinity"):
            return POS_INF
        return int(text)
    return value


def make_interval_set(raw: Iterable[Sequence[Union[int, str]]]) -> IntervalSet:
    """Build a canonical IntervalSet from raw bounds, accepting "-inf"/"inf" strings."""
    return IntervalSet.of((parse_bound(lo), parse_bound(hi)) for lo, hi in raw)
