from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Tuple

from app.models.concepts import TOP
from app.models.interpretation import FiniteInterpretation
from app.models.interval_set import IntervalSet


@dataclass(frozen=True)
class TemporalExtensionMap:
    """Entailed temporal assertions: (individual, concept) and (role, subject, object) to time points."""

    individuals: FrozenSet[str]
    concepts: Mapping[Tuple[str, str], IntervalSet]
    roles: Mapping[Tuple[str, str, str], IntervalSet]
    tem: Tuple[int, ...] = ()

    def concept_extension(self, individual: str, concept: str) -> IntervalSet:
        if concept == TOP and individual in self.individuals:
            return IntervalSet.full()
        return self.concepts.get((individual, concept), IntervalSet.empty())

    def role_extension(self, role: str, subject: str, obj: str) -> IntervalSet:
        return self.roles.get((role, subject, obj), IntervalSet.empty())

    def snapshot(self, i: int) -> FiniteInterpretation:
        """The named structure holding at time point i."""
        concepts: Dict[str, set] = {}
        for (individual, concept), points in self.concepts.items():
            if points.contains(i):
                concepts.setdefault(concept, set()).add(individual)
        roles: Dict[str, set] = {}
        for (role, subject, obj), points in self.roles.items():
            if points.contains(i):
                roles.setdefault(role, set()).add((subject, obj))
        return FiniteInterpretation.build(self.individuals, concepts, roles)

    def snapshot_key(self, i: int) -> Tuple:
        concepts = tuple(sorted(k for k, v in self.concepts.items() if v.contains(i)))
        roles = tuple(sorted(k for k, v in self.roles.items() if v.contains(i)))
        return concepts, roles


@dataclass(frozen=True)
class TemporalStructure:
    """Named snapshots at the representative time points."""

    representatives: Tuple[int, ...]
    snapshots: Mapping[int, FiniteInterpretation]
    extensions: TemporalExtensionMap
    tem: Tuple[int, ...] = ()

    @property
    def individuals(self) -> List[str]:
        return sorted(self.extensions.individuals)

    def snapshot(self, representative: int) -> FiniteInterpretation:
        return self.snapshots[representative]


@dataclass(frozen=True, order=True)
class VirtualPoint:
    """Time point t + n, addressed through the representative t."""

    t: int
    n: int = 0

    @property
    def value(self) -> int:
        return self.t + self.n
