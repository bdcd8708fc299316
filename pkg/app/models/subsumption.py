"""
Classified subsumption hierarchy of a normalized atemporal TBox.
"""
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Mapping, Tuple

from app.models.axioms import ExistsRHS
from app.models.concepts import BOT, FRESH_PREFIX, TOP


def representative_key(name: str) -> Tuple[bool, str]:
    """Sort key picking the preferred member of an equivalence class: user names first, then lexicographic."""
    return (name.startswith(FRESH_PREFIX), name)


@dataclass(frozen=True)
class SubsumptionTable:
    # concept name -> all entailed subsumers (reflexive, top included)
    concept_subsumers: Mapping[str, FrozenSet[str]]
    # role name -> reflexive-transitive super-roles
    role_supers: Mapping[str, FrozenSet[str]]
    told_existentials: Tuple[ExistsRHS, ...] = ()
    concept_names: FrozenSet[str] = field(default_factory=frozenset)
    role_names: FrozenSet[str] = field(default_factory=frozenset)

    def subsumers(self, concept: str) -> FrozenSet[str]:
        if concept in self.concept_subsumers:
            return self.concept_subsumers[concept]
        if concept == BOT:
            return self.concept_names | {TOP, BOT}
        return frozenset({concept, TOP})

    def super_roles(self, role: str) -> FrozenSet[str]:
        return self.role_supers.get(role, frozenset({role}))

    def subsumes(self, sub: str, sup: str) -> bool:
        """sub ⊑ sup for concept names (top and bot included)."""
        if sup == TOP or sub == sup:
            return True
        return sup in self.subsumers(sub) or BOT in self.subsumers(sub)

    def role_subsumes(self, sub: str, sup: str) -> bool:
        return sup in self.super_roles(sub)

    def equivalent(self, a: str, b: str) -> bool:
        return self.subsumes(a, b) and self.subsumes(b, a)

    def is_unsatisfiable(self, concept: str) -> bool:
        return concept == BOT or BOT in self.subsumers(concept)

    def structurally_subsumed(self, role: str, filler: str, other_role: str, other_filler: str) -> bool:
        """∃role.filler ⊑ˢ ∃other_role.other_filler"""
        return self.role_subsumes(role, other_role) and self.subsumes(filler, other_filler)

    def closure(self, names: Iterable[str]) -> FrozenSet[str]:
        """All subsumers of a set of names, top included."""
        result = set(self.subsumers(TOP))
        for name in names:
            result |= self.subsumers(name)
        return frozenset(result)

    def subsumees(self, concept: str, among: Iterable[str]) -> List[str]:
        return sorted(name for name in among if self.subsumes(name, concept))

    def maximal(self, names: Iterable[str]) -> List[str]:
        """⊑-maximal names, one representative per equivalence class."""
        pool = sorted(set(names), key=representative_key)
        kept: List[str] = []
        for name in pool:
            if any(self.subsumes(name, other) and not self.subsumes(other, name) for other in pool):
                continue
            if any(self.equivalent(name, other) for other in kept):
                continue
            kept.append(name)
        return kept

    def pairs(self) -> List[Tuple[str, str]]:
        """Non-trivial subsumptions A ⊑ B between classified names (bot and top excluded)."""
        result = []
        for name in sorted(self.concept_subsumers):
            if name in (TOP, BOT):
                continue
            for sup in sorted(self.concept_subsumers[name]):
                if sup not in (name, TOP):
                    result.append((name, sup))
        return result
