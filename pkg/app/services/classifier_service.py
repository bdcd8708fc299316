"""
Classification of normalized ELH⊥ TBoxes by completion rules.

Temporal TBoxes are classified through their atemporal projection, in which
every diamond inclusion ◇A ⊑ B becomes A ⊑ B.
"""
from collections import defaultdict
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

import networkx as nx

from app.core.logging import get_logger
from app.models.axioms import ConjCI, DiamCI, ExistsLHS, ExistsRHS, NormalAxiom, RoleCI
from app.models.concepts import BOT, TOP
from app.models.knowledge_base import KnowledgeBase
from app.models.subsumption import SubsumptionTable
from app.utils.logger import log_stage_event

logger = get_logger("services.classifier")


def atemporal_projection(tbox: Iterable[NormalAxiom]) -> Tuple[NormalAxiom, ...]:
    projected: List[NormalAxiom] = []
    for axiom in tbox:
        if isinstance(axiom, DiamCI):
            axiom = ConjCI(axiom.sub, TOP, axiom.sup)
        if axiom not in projected:
            projected.append(axiom)
    return tuple(projected)


def role_hierarchy(role_axioms: Iterable[RoleCI], roles: Iterable[str]) -> Dict[str, FrozenSet[str]]:
    """Reflexive-transitive closure of role inclusions."""
    graph = nx.DiGraph()
    graph.add_nodes_from(roles)
    for axiom in role_axioms:
        graph.add_edge(axiom.sub, axiom.sup)
    return {role: frozenset(nx.descendants(graph, role) | {role}) for role in graph.nodes}


class ClassifierService:
    def __init__(self, tbox: Iterable[NormalAxiom], concepts: Iterable[str] = (), roles: Iterable[str] = ()):
        self.tbox = atemporal_projection(tbox)
        self.extra_concepts = set(concepts)
        self.extra_roles = set(roles)

    def classify(self) -> SubsumptionTable:
        tbox = self.tbox
        names: Set[str] = {TOP, BOT} | {c for c in self.extra_concepts}
        roles: Set[str] = set(self.extra_roles)
        for axiom in tbox:
            if isinstance(axiom, ConjCI):
                names |= {axiom.left, axiom.right, axiom.sup}
            elif isinstance(axiom, ExistsRHS):
                names |= {axiom.sub, axiom.filler}
                roles.add(axiom.role)
            elif isinstance(axiom, ExistsLHS):
                names |= {axiom.filler, axiom.sup}
                roles.add(axiom.role)
            elif isinstance(axiom, RoleCI):
                roles |= {axiom.sub, axiom.sup}

        supers = role_hierarchy((a for a in tbox if isinstance(a, RoleCI)), roles)

        conj_index: Dict[str, List[Tuple[str, str]]] = defaultdict(list)
        exists_rhs: Dict[str, List[Tuple[str, str]]] = defaultdict(list)
        exists_lhs: Dict[Tuple[str, str], List[str]] = defaultdict(list)
        for axiom in tbox:
            if isinstance(axiom, ConjCI):
                conj_index[axiom.left].append((axiom.right, axiom.sup))
                conj_index[axiom.right].append((axiom.left, axiom.sup))
            elif isinstance(axiom, ExistsRHS):
                exists_rhs[axiom.sub].append((axiom.role, axiom.filler))
            elif isinstance(axiom, ExistsLHS):
                exists_lhs[(axiom.role, axiom.filler)].append(axiom.sup)

        subsumers: Dict[str, Set[str]] = {name: {name, TOP} for name in names}
        links: Dict[str, Set[Tuple[str, str]]] = defaultdict(set)

        rounds = 0
        changed = True
        while changed:
            changed = False
            rounds += 1
            for name in names:
                current = subsumers[name]
                for member in list(current):
                    for other, sup in conj_index.get(member, ()):
                        if other in current and sup not in current:
                            current.add(sup)
                            changed = True
                    for role, filler in exists_rhs.get(member, ()):
                        if (name, filler) not in links[role]:
                            links[role].add((name, filler))
                            changed = True
            for role, pairs in list(links.items()):
                for source, target in list(pairs):
                    current = subsumers[source]
                    target_subsumers = subsumers[target]
                    if BOT in target_subsumers and BOT not in current:
                        current.add(BOT)
                        changed = True
                    for sup_role in supers.get(role, (role,)):
                        for filler in list(target_subsumers):
                            for sup in exists_lhs.get((sup_role, filler), ()):
                                if sup not in current:
                                    current.add(sup)
                                    changed = True
        logger.debug(f"Completion reached a fixpoint after {rounds} rounds")

        everything = frozenset(names)
        table: Dict[str, FrozenSet[str]] = {}
        for name in names:
            table[name] = everything if BOT in subsumers[name] else frozenset(subsumers[name])
        table[BOT] = everything

        result = SubsumptionTable(
            concept_subsumers=table,
            role_supers=supers,
            told_existentials=tuple(sorted({a for a in tbox if isinstance(a, ExistsRHS)})),
            concept_names=frozenset(names - {TOP, BOT}),
            role_names=frozenset(roles),
        )
        log_stage_event("classified", None, concepts=len(names), roles=len(roles), rounds=rounds)
        return result


def classify(tbox: Iterable[NormalAxiom], concepts: Iterable[str] = (), roles: Iterable[str] = ()) -> SubsumptionTable:
    return ClassifierService(tbox, concepts, roles).classify()


def classify_kb(kb: KnowledgeBase) -> SubsumptionTable:
    """Classify a normalized knowledge base over its whole signature."""
    return classify(kb.tbox, kb.concept_names, kb.role_names)


def structurally_subsumed(table: SubsumptionTable, role: str, filler: str, other_role: str, other_filler: str) -> bool:
    return table.structurally_subsumed(role, filler, other_role, other_filler)
