"""
Knowledge bases: signature, raw and normalized TBox, ABox and time points.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from app.core.exceptions import KBValidationError
from app.models.assertions import Assertion, ConceptAssertion, RoleAssertion
from app.models.axioms import (
    ConceptInclusion,
    DiamCI,
    NormalAxiom,
    RawAxiom,
    RoleInclusion,
    axiom_concepts,
    axiom_roles,
)
from app.models.concepts import Concept, concept_names, has_diamond, role_names


class KBMode(str, Enum):
    ATEMPORAL = "atemporal"
    TEMPORAL = "temporal"


@dataclass(frozen=True)
class KnowledgeBase:
    raw_tbox: Tuple[RawAxiom, ...] = ()
    abox: Tuple[Assertion, ...] = ()
    tbox: Tuple[NormalAxiom, ...] = ()
    normalized: bool = False
    # fresh name -> the concept it abbreviates
    name_map: Dict[str, Concept] = field(default_factory=dict, compare=False)
    source: str = field(default="<kb>", compare=False)

    @property
    def concept_names(self) -> FrozenSet[str]:
        names = set()
        for axiom in self.raw_tbox:
            if isinstance(axiom, ConceptInclusion):
                names |= concept_names(axiom.lhs) | concept_names(axiom.rhs)
        for axiom in self.tbox:
            names |= axiom_concepts(axiom)
        for assertion in self.abox:
            if isinstance(assertion, ConceptAssertion):
                names |= concept_names(assertion.concept)
        return frozenset(names)

    @property
    def role_names(self) -> FrozenSet[str]:
        names = set()
        for axiom in self.raw_tbox:
            if isinstance(axiom, ConceptInclusion):
                names |= role_names(axiom.lhs) | role_names(axiom.rhs)
            else:
                names |= {axiom.sub, axiom.sup}
        for axiom in self.tbox:
            names |= axiom_roles(axiom)
        for assertion in self.abox:
            if isinstance(assertion, RoleAssertion):
                names.add(assertion.role)
            else:
                names |= role_names(assertion.concept)
        return frozenset(names)

    @property
    def tbox_concept_names(self) -> FrozenSet[str]:
        names = set()
        for axiom in self.tbox:
            names |= axiom_concepts(axiom)
        return frozenset(names)

    @property
    def tbox_role_names(self) -> FrozenSet[str]:
        names = set()
        for axiom in self.tbox:
            names |= axiom_roles(axiom)
        return frozenset(names)

    @property
    def individuals(self) -> FrozenSet[str]:
        names = set()
        for assertion in self.abox:
            if isinstance(assertion, ConceptAssertion):
                names.add(assertion.individual)
            else:
                names |= {assertion.subject, assertion.object}
        return frozenset(names)

    @property
    def tem(self) -> List[int]:
        return sorted({a.time for a in self.abox if a.time is not None})

    @property
    def has_timed_data(self) -> bool:
        return any(a.time is not None for a in self.abox)

    @property
    def has_diamonds(self) -> bool:
        if any(isinstance(axiom, DiamCI) for axiom in self.tbox):
            return True
        for axiom in self.raw_tbox:
            if isinstance(axiom, ConceptInclusion) and (has_diamond(axiom.lhs) or has_diamond(axiom.rhs)):
                return True
        return False

    @property
    def mode(self) -> KBMode:
        if self.has_timed_data or self.has_diamonds:
            return KBMode.TEMPORAL
        return KBMode.ATEMPORAL

    @property
    def is_temporal(self) -> bool:
        return self.mode == KBMode.TEMPORAL

    @property
    def fresh_names(self) -> FrozenSet[str]:
        return frozenset(self.name_map)

    def with_assertions(self, assertions: Iterable[Assertion]) -> "KnowledgeBase":
        """Append assertions; the time-stamp discipline is re-checked on the result."""
        kb = replace(self, abox=self.abox + tuple(assertions))
        validate_time_stamps(kb)
        return kb

    def role_inclusions(self) -> List[RoleInclusion]:
        return [axiom for axiom in self.raw_tbox if isinstance(axiom, RoleInclusion)]


def validate_time_stamps(kb: KnowledgeBase) -> None:
    """Timed and untimed assertions are never mixed; temporal TBoxes need timed data."""
    timed: Optional[Assertion] = None
    untimed: Optional[Assertion] = None
    for assertion in kb.abox:
        if assertion.time is None:
            untimed = untimed or assertion
        else:
            timed = timed or assertion
    if timed is not None and untimed is not None:
        raise KBValidationError(
            f"timed assertion {timed.render()} mixed with untimed assertion {untimed.render()}",
            untimed.location or timed.location,
        )
    if untimed is not None and kb.has_diamonds:
        raise KBValidationError(
            f"untimed assertion {untimed.render()} in a temporal knowledge base",
            untimed.location,
        )
