"""
Entailed temporal assertions as interval sets, and the finite structure over the
representative time points.
"""
from collections import defaultdict
from typing import Dict, Iterable, List, Set, Tuple

from app.core.exceptions import InconsistencyError, RefusalError
from app.core.logging import get_logger
from app.models.assertions import ConceptAssertion, RoleAssertion
from app.models.axioms import ConjCI, DiamCI, ExistsLHS
from app.models.concepts import BOT, TOP
from app.models.diamond import apply_diamond
from app.models.interval_set import IntervalSet
from app.models.knowledge_base import KnowledgeBase
from app.models.subsumption import SubsumptionTable
from app.models.temporal import TemporalExtensionMap, TemporalStructure
from app.services.canonical_model_service import inconsistency_witness
from app.utils.logger import log_stage_event

logger = get_logger("services.temporal_saturation")

ConceptKey = Tuple[str, str]
RoleKey = Tuple[str, str, str]


def representatives(tem: Iterable[int]) -> List[int]:
    """tem plus the finite endpoints of every maximal gap between (and around) its points."""
    points = sorted(set(tem))
    if not points:
        raise RefusalError("no temporal data: the ABox has no time stamps")
    result: Set[int] = set(points)
    for t in points:
        result |= {t - 1, t + 1}
    return sorted(result)


class TemporalSaturationService:
    def __init__(self, kb: KnowledgeBase, table: SubsumptionTable):
        self.kb = kb
        self.table = table
        self._concepts: Dict[ConceptKey, IntervalSet] = {}
        self._roles: Dict[RoleKey, IntervalSet] = {}

    def saturate(self) -> TemporalExtensionMap:
        """Least fixpoint of the temporal ABox under the normalized TBox."""
        kb = self.kb
        individuals = sorted(kb.individuals)
        for assertion in kb.abox:
            point = IntervalSet.point(assertion.time)
            if isinstance(assertion, ConceptAssertion):
                self._add_concept(assertion.individual, assertion.concept_name, point)
            elif isinstance(assertion, RoleAssertion):
                for role in self.table.super_roles(assertion.role):
                    key = (role, assertion.subject, assertion.object)
                    self._roles[key] = self._roles.get(key, IntervalSet.empty()) | point

        conj = [a for a in kb.tbox if isinstance(a, ConjCI)]
        diam = [a for a in kb.tbox if isinstance(a, DiamCI)]
        exists_lhs = [a for a in kb.tbox if isinstance(a, ExistsLHS)]

        rounds = 0
        changed = True
        while changed:
            rounds += 1
            changed = False
            for individual in individuals:
                for axiom in conj:
                    both = self._extension(individual, axiom.left) & self._extension(individual, axiom.right)
                    changed |= self._add_concept(individual, axiom.sup, both)
                for axiom in diam:
                    spread = apply_diamond(axiom.op, self._extension(individual, axiom.sub))
                    changed |= self._add_concept(individual, axiom.sup, spread)
                changed |= self._close_subsumers(individual)
            for axiom in exists_lhs:
                for (role, subject, obj), times in list(self._roles.items()):
                    if role != axiom.role:
                        continue
                    witnessed = times & self._extension(obj, axiom.filler)
                    changed |= self._add_concept(subject, axiom.sup, witnessed)
            # bot at a successor makes its predecessor inconsistent at the same time
            for (role, subject, obj), times in list(self._roles.items()):
                changed |= self._add_concept(subject, BOT, times & self._extension(obj, BOT))
        logger.debug(f"Temporal saturation reached a fixpoint after {rounds} rounds")

        for (individual, concept), times in sorted(self._concepts.items()):
            if concept == BOT and times:
                time = times.sample_points()[0]
                witness = inconsistency_witness(kb, individual, time)
                raise InconsistencyError(
                    f"{kb.source} is inconsistent: bot holds for {individual} at {time}", witness
                )

        extensions = TemporalExtensionMap(
            individuals=frozenset(individuals),
            concepts=dict(self._concepts),
            roles=dict(self._roles),
            tem=tuple(kb.tem),
        )
        log_stage_event(
            "saturated",
            kb.source,
            individuals=len(individuals),
            concept_facts=len(self._concepts),
            role_facts=len(self._roles),
            rounds=rounds,
        )
        return extensions

    def build_temporal_structure(self) -> TemporalStructure:
        extensions = self.saturate()
        reps = representatives(self.kb.tem)
        snapshots = {t: extensions.snapshot(t) for t in reps}
        return TemporalStructure(
            representatives=tuple(reps), snapshots=snapshots, extensions=extensions, tem=tuple(self.kb.tem)
        )

    def _extension(self, individual: str, concept: str) -> IntervalSet:
        if concept == TOP:
            return IntervalSet.full()
        return self._concepts.get((individual, concept), IntervalSet.empty())

    def _add_concept(self, individual: str, concept: str, times: IntervalSet) -> bool:
        if concept == TOP or not times:
            return False
        key = (individual, concept)
        current = self._concepts.get(key, IntervalSet.empty())
        merged = current | times
        if merged == current:
            return False
        self._concepts[key] = merged
        return True

    def _close_subsumers(self, individual: str) -> bool:
        """a ∈ A at i and A ⊑ B under the atemporal projection give a ∈ B at i."""
        changed = False
        for sup in self.table.subsumers(TOP):
            changed |= self._add_concept(individual, sup, IntervalSet.full())
        for (owner, concept), times in list(self._concepts.items()):
            if owner != individual:
                continue
            for sup in self.table.subsumers(concept):
                changed |= self._add_concept(individual, sup, times)
        return changed


def saturate(kb: KnowledgeBase, table: SubsumptionTable) -> TemporalExtensionMap:
    return TemporalSaturationService(kb, table).saturate()


def build_temporal_structure(kb: KnowledgeBase, table: SubsumptionTable) -> TemporalStructure:
    return TemporalSaturationService(kb, table).build_temporal_structure()


def concept_table(extensions: TemporalExtensionMap) -> Dict[str, Dict[str, IntervalSet]]:
    """individual -> concept -> interval set, for dumps."""
    table: Dict[str, Dict[str, IntervalSet]] = defaultdict(dict)
    for (individual, concept), times in extensions.concepts.items():
        table[individual][concept] = times
    return table
