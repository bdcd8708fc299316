from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Set, Tuple

from app.models.interval_set import IntervalSet

AnswerTuple = Tuple[str, ...]


@dataclass(frozen=True)
class AnswerSet:
    """Answer tuples mapped to the time points at which they hold (all of ℤ for atemporal answers)."""

    arity: int
    answers: Mapping[AnswerTuple, IntervalSet] = field(default_factory=dict)
    temporal: bool = False

    @classmethod
    def atemporal(cls, arity: int, tuples: Iterable[AnswerTuple]) -> "AnswerSet":
        return cls(arity, {tuple(t): IntervalSet.full() for t in tuples}, temporal=False)

    @classmethod
    def from_map(cls, arity: int, answers: Mapping[AnswerTuple, IntervalSet]) -> "AnswerSet":
        """Temporal answers; tuples with no time points are dropped."""
        return cls(arity, {t: s for t, s in answers.items() if s}, temporal=True)

    def tuples(self) -> List[AnswerTuple]:
        return sorted(self.answers)

    def tuple_set(self) -> Set[AnswerTuple]:
        return set(self.answers)

    def intervals(self, answer: AnswerTuple) -> IntervalSet:
        return self.answers.get(answer, IntervalSet.empty())

    def __len__(self) -> int:
        return len(self.answers)

    def __contains__(self, answer: AnswerTuple) -> bool:
        return answer in self.answers

    def restrict(self, points: IntervalSet) -> "AnswerSet":
        if not self.temporal:
            return self
        return AnswerSet.from_map(self.arity, {t: s & points for t, s in self.answers.items()})

    def restrict_to_points(self, points: Iterable[int]) -> "AnswerSet":
        return self.restrict(IntervalSet.from_points(points))

    def window(self, lo: int, hi: int) -> "AnswerSet":
        return self.restrict(IntervalSet.of([(lo, hi)]))

    def as_points(self, lo: int, hi: int) -> Set[Tuple[AnswerTuple, int]]:
        """(tuple, time) pairs inside a finite window."""
        return {(t, i) for t, s in self.answers.items() for i in s.points_within(lo, hi)}

    def as_dict(self) -> Dict[AnswerTuple, IntervalSet]:
        return {t: self.answers[t] for t in self.tuples()}
