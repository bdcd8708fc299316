"""
The minimal canonical model: its named part I_A and depth-bounded anonymous expansions.
"""
from collections import defaultdict, deque
from typing import Deque, Dict, List, Mapping, Optional, Set, Tuple

from app.core.exceptions import InconsistencyError
from app.core.logging import get_logger
from app.models.assertions import ConceptAssertion, RoleAssertion
from app.models.axioms import ConjCI, ExistsLHS
from app.models.concepts import BOT, TOP
from app.models.interpretation import FiniteInterpretation
from app.models.knowledge_base import KnowledgeBase
from app.models.subsumption import SubsumptionTable, representative_key
from app.services.classifier_service import atemporal_projection
from app.utils.logger import log_stage_event

logger = get_logger("services.canonical_model")

Restriction = Tuple[str, str]


def saturate_named(
    individuals: List[str],
    labels: Dict[str, Set[str]],
    edges: Dict[Tuple[str, str], Set[str]],
    tbox,
    table: SubsumptionTable,
) -> None:
    """
    Close named memberships and edges under the TBox, in place.

    labels maps individuals to concept names, edges maps (a, b) to role names.
    Rules: super-roles on edges, classified subsumers, conjunctions, and ∃r.A ⊑ B
    over named edges.
    """
    conj = [a for a in tbox if isinstance(a, ConjCI)]
    exists_lhs: Dict[Tuple[str, str], List[str]] = defaultdict(list)
    for axiom in tbox:
        if isinstance(axiom, ExistsLHS):
            exists_lhs[(axiom.role, axiom.filler)].append(axiom.sup)

    for pair, roles in edges.items():
        closed = set()
        for role in roles:
            closed |= table.super_roles(role)
        edges[pair] = closed

    changed = True
    while changed:
        changed = False
        for individual in individuals:
            current = labels.setdefault(individual, set())
            before = len(current)
            current |= table.closure(current)
            for axiom in conj:
                if axiom.left in current and axiom.right in current:
                    current.add(axiom.sup)
            if len(current) != before:
                changed = True
        for (source, target), roles in edges.items():
            current = labels[source]
            target_labels = labels[target] | {TOP}
            for role in roles:
                for filler in target_labels:
                    for sup in exists_lhs.get((role, filler), ()):
                        if sup not in current:
                            current.add(sup)
                            changed = True
            if BOT in target_labels and BOT not in current:
                current.add(BOT)
                changed = True


def inconsistency_witness(kb: KnowledgeBase, individual: str, time: Optional[int] = None) -> str:
    """The first assertion about an individual (at a time point, when given)."""
    for assertion in kb.abox:
        if time is not None and assertion.time is not None and assertion.time > time:
            continue
        if isinstance(assertion, ConceptAssertion) and assertion.individual == individual:
            return assertion.render()
        if isinstance(assertion, RoleAssertion) and individual in (assertion.subject, assertion.object):
            return assertion.render()
    suffix = "" if time is None else f" @ {time}"
    return f"{BOT}({individual}){suffix}"


class CanonicalModelService:
    """Build I_A for an atemporal knowledge base and expand interpretations with anonymous witnesses."""

    def __init__(self, kb: KnowledgeBase, table: SubsumptionTable):
        self.kb = kb
        self.table = table

    def build_named_part(self) -> FiniteInterpretation:
        kb = self.kb
        individuals = sorted(kb.individuals)
        labels: Dict[str, Set[str]] = {a: set() for a in individuals}
        edges: Dict[Tuple[str, str], Set[str]] = defaultdict(set)
        for assertion in kb.abox:
            if isinstance(assertion, ConceptAssertion):
                labels[assertion.individual].add(assertion.concept_name)
            else:
                edges[(assertion.subject, assertion.object)].add(assertion.role)

        tbox = atemporal_projection(kb.tbox)
        saturate_named(individuals, labels, edges, tbox, self.table)

        for individual in individuals:
            if BOT in labels[individual]:
                witness = inconsistency_witness(kb, individual)
                raise InconsistencyError(f"{kb.source} is inconsistent: bot holds for {individual}", witness)

        interpretation = named_interpretation(individuals, labels, edges)
        log_stage_event("named_part", kb.source, individuals=len(individuals))
        return interpretation

    def expand(self, interpretation: FiniteInterpretation, depth_limit: int) -> FiniteInterpretation:
        return expand_canonical(interpretation, self.table, depth_limit)


def named_interpretation(
    individuals: List[str], labels: Mapping[str, Set[str]], edges: Mapping[Tuple[str, str], Set[str]]
) -> FiniteInterpretation:
    concepts: Dict[str, Set[str]] = defaultdict(set)
    for individual, names in labels.items():
        for name in names:
            concepts[name].add(individual)
    roles: Dict[str, Set[Tuple[str, str]]] = defaultdict(set)
    for pair, names in edges.items():
        for name in names:
            roles[name].add(pair)
    return FiniteInterpretation.build(individuals, concepts, roles)


def minimal_restrictions(candidates: List[Restriction], table: SubsumptionTable) -> List[Restriction]:
    """⊑ˢ-minimal restrictions, one per structural equivalence class (least role, then concept)."""
    pool = sorted(set(candidates), key=lambda rc: (representative_key(rc[0]), representative_key(rc[1])))
    kept: List[Restriction] = []
    for role, filler in pool:
        strictly_below = any(
            table.structurally_subsumed(r, f, role, filler) and not table.structurally_subsumed(role, filler, r, f)
            for r, f in pool
        )
        if strictly_below:
            continue
        if any(
            table.structurally_subsumed(role, filler, r, f) and table.structurally_subsumed(r, f, role, filler)
            for r, f in kept
        ):
            continue
        kept.append((role, filler))
    return kept


def expand_canonical(interpretation: FiniteInterpretation, table: SubsumptionTable, depth_limit: int) -> FiniteInterpretation:
    """
    Breadth-first application of the anonymous-witness step up to a given depth.

    Each element gets one fresh child per ⊑ˢ-minimal existential restriction it
    entails but does not yet satisfy. Children carry all subsumers of the filler
    and all super-roles of the role.
    """
    concepts: Dict[str, Set[str]] = defaultdict(set)
    for name, members in interpretation.concepts.items():
        concepts[name] |= members
    roles: Dict[str, Set[Tuple[str, str]]] = defaultdict(set)
    for name, pairs in interpretation.roles.items():
        roles[name] |= pairs
    types: Dict[str, Set[str]] = {d: set(interpretation.type_of(d)) for d in interpretation.domain}
    successors: Dict[str, List[Tuple[str, str]]] = defaultdict(list)
    for name, pairs in interpretation.roles.items():
        for source, target in pairs:
            successors[source].append((name, target))

    depth = dict(interpretation.depth)
    parent = dict(interpretation.parent)
    anonymous: List[str] = list(interpretation.anonymous())
    queue: Deque[str] = deque(sorted(interpretation.domain, key=lambda d: (depth.get(d, 0), d)))

    def satisfied(element: str, role: str, filler: str) -> bool:
        return any(r == role and filler in types[target] for r, target in successors[element])

    while queue:
        element = queue.popleft()
        level = depth.get(element, 0)
        if level >= depth_limit:
            continue
        candidates: List[Restriction] = []
        for axiom in table.told_existentials:
            if axiom.sub in types[element] and not satisfied(element, axiom.role, axiom.filler):
                candidates.append((axiom.role, axiom.filler))
        for role, filler in minimal_restrictions(candidates, table):
            child = f"{element}~{role}.{filler}"
            if child in types:
                continue
            child_type = set(table.closure([filler]))
            types[child] = child_type
            for name in child_type:
                if name != TOP:
                    concepts[name].add(child)
            for sup in table.super_roles(role):
                roles[sup].add((element, child))
                successors[element].append((sup, child))
            depth[child] = level + 1
            parent[child] = element
            anonymous.append(child)
            queue.append(child)

    logger.debug(f"Expanded to depth {depth_limit}: {len(anonymous)} anonymous elements")
    return FiniteInterpretation.build(
        interpretation.named, concepts, roles, anonymous=anonymous, depth=depth, parent=parent
    )
