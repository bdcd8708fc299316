"""
Normalization of raw TBoxes and complex assertions.

Complex subconcepts are abbreviated by fresh names `_N<k>`; identical subconcepts
share one fresh name. Axioms that already have a normal shape are mapped directly,
so normalization introduces no fresh names for them.
"""
import re
from dataclasses import replace
from typing import Dict, List, Set

from app.core.exceptions import KBValidationError
from app.core.logging import get_logger
from app.models.assertions import Assertion, ConceptAssertion
from app.models.axioms import (
    ConjCI,
    DiamCI,
    ExistsLHS,
    ExistsRHS,
    NormalAxiom,
    RoleCI,
    RoleInclusion,
)
from app.models.concepts import (
    BOT,
    FRESH_PREFIX,
    TOP,
    And,
    Bot,
    Concept,
    Diam,
    Exists,
    Name,
    Top,
    conjuncts,
    render_concept,
)
from app.models.knowledge_base import KnowledgeBase
from app.utils.logger import log_stage_event

logger = get_logger("services.normalizer")

_FRESH_INDEX = re.compile(rf"^{re.escape(FRESH_PREFIX)}(\d+)$")

# a fresh name X for C is used as C ⊑ X on left-hand sides and X ⊑ C on right-hand sides
_SUB = "sub"
_SUP = "sup"


class NormalizerService:
    """Rewrite one knowledge base into normal form."""

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        self._axioms: List[NormalAxiom] = []
        self._seen: Set[NormalAxiom] = set()
        self._names: Dict[Concept, str] = {}
        self._directions: Dict[str, Set[str]] = {}
        self._name_map: Dict[str, Concept] = dict(kb.name_map)
        for fresh, concept in kb.name_map.items():
            self._names[concept] = fresh
        self._counter = 1 + max(
            (int(m.group(1)) for m in map(_FRESH_INDEX.match, kb.name_map) if m), default=0
        )

    def normalize(self) -> KnowledgeBase:
        kb = self.kb
        if kb.normalized:
            logger.debug(f"{kb.source} is already normalized")
            return kb
        self._check_reserved()

        for axiom in kb.raw_tbox:
            if isinstance(axiom, RoleInclusion):
                self._emit(RoleCI(axiom.sub, axiom.sup))
            else:
                self._inclusion(axiom.lhs, axiom.rhs)

        abox: List[Assertion] = []
        for assertion in kb.abox:
            if isinstance(assertion, ConceptAssertion) and assertion.is_complex:
                abox.append(replace(assertion, concept=Name(self._define(assertion.concept))))
            else:
                abox.append(assertion)

        result = replace(
            kb,
            abox=tuple(abox),
            tbox=tuple(self._axioms),
            normalized=True,
            name_map=dict(self._name_map),
        )
        log_stage_event(
            "normalized",
            kb.source,
            axioms=len(self._axioms),
            fresh_names=len(self._name_map) - len(kb.name_map),
        )
        return result

    def _check_reserved(self) -> None:
        user_names = set(self.kb.concept_names) | set(self.kb.role_names)
        for name in sorted(user_names):
            if name.startswith(FRESH_PREFIX) and name not in self.kb.name_map:
                raise KBValidationError(f"{name} collides with the reserved prefix {FRESH_PREFIX}")

    def _emit(self, axiom: NormalAxiom) -> None:
        if axiom not in self._seen:
            self._seen.add(axiom)
            self._axioms.append(axiom)

    def _fresh(self, concept: Concept, direction: str) -> str:
        """Fresh name for a complex concept, with the definitional inclusion for the requested direction."""
        name = self._names.get(concept)
        if name is None:
            name = f"{FRESH_PREFIX}{self._counter}"
            self._counter += 1
            self._names[concept] = name
            self._name_map[name] = concept
            logger.debug(f"{name} := {render_concept(concept)}")
        done = self._directions.setdefault(name, set())
        if direction not in done:
            done.add(direction)
            if direction == _SUB:
                self._inclusion(concept, Name(name))
            else:
                self._inclusion(Name(name), concept)
        return name

    def _define(self, concept: Concept) -> str:
        """X ≡ C for a complex assertion C(a)."""
        name = self._fresh(concept, _SUB)
        self._fresh(concept, _SUP)
        return name

    def _inclusion(self, lhs: Concept, rhs: Concept) -> None:
        if isinstance(rhs, Top):
            return
        if isinstance(rhs, And):
            for part in conjuncts(rhs):
                self._inclusion(lhs, part)
            return
        if isinstance(rhs, Bot):
            self._left(lhs, BOT)
            return
        if isinstance(rhs, Name):
            self._left(lhs, rhs.name)
            return
        if isinstance(rhs, Diam):
            raise KBValidationError(f"{render_concept(rhs)} is not an atemporal concept")
        # rhs is ∃r.F
        filler = rhs.filler
        if isinstance(filler, Bot):
            self._left(lhs, BOT)
            return
        sub = self._left_name(lhs)
        if sub is None:
            return
        if isinstance(filler, Name):
            target = filler.name
        else:
            target = self._fresh(filler, _SUP)
        self._emit(ExistsRHS(sub, rhs.role, target))

    def _left_name(self, lhs: Concept):
        """A single name standing for the left-hand side; None when the left-hand side is empty."""
        if isinstance(lhs, Name):
            return lhs.name
        if isinstance(lhs, Top):
            return TOP
        parts = self._flatten(lhs)
        if parts is None:
            return None
        if not parts:
            return TOP
        if len(parts) == 1 and isinstance(parts[0], Name):
            return parts[0].name
        return self._fresh(lhs, _SUB)

    @staticmethod
    def _flatten(lhs: Concept):
        """Conjuncts with top removed; None when a conjunct is bot."""
        parts: List[Concept] = []
        for part in conjuncts(lhs):
            if isinstance(part, Bot):
                return None
            if isinstance(part, Top) or part in parts:
                continue
            parts.append(part)
        return parts

    def _left(self, lhs: Concept, sup: str) -> None:
        parts = self._flatten(lhs)
        if parts is None:
            return
        if not parts:
            self._emit(ConjCI(TOP, TOP, sup))
            return
        if len(parts) == 1:
            self._single(parts[0], sup)
            return
        names = [part.name if isinstance(part, Name) else self._fresh(part, _SUB) for part in parts]
        current = names[0]
        for name in names[1:-1]:
            current = self._fresh(And(Name(current), Name(name)), _SUB)
        self._emit(ConjCI(current, names[-1], sup))

    def _single(self, part: Concept, sup: str) -> None:
        if isinstance(part, Name):
            self._emit(ConjCI(part.name, TOP, sup))
            return
        filler = part.filler
        if isinstance(filler, Bot):
            return
        if isinstance(filler, Top):
            sub = TOP
        elif isinstance(filler, Name):
            sub = filler.name
        else:
            sub = self._fresh(filler, _SUB)
        if isinstance(part, Exists):
            self._emit(ExistsLHS(part.role, sub, sup))
        else:
            self._emit(DiamCI(part.op, sub, sup))


def normalize(kb: KnowledgeBase) -> KnowledgeBase:
    return NormalizerService(kb).normalize()
