"""
Rewriting of NCQs into sets of filtered queries over the named part of the canonical model.

Each step picks a quantified leaf variable x̂ and a TBox axiom M ⊑ ∃s.N whose anonymous
witness could have been the match of x̂, drops x̂, merges its predecessors into one term
and installs a filter that checks the witness would not have been atypical.
"""
from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, List, Mapping, Optional, Set, Tuple

from app.core.logging import get_logger
from app.models.concepts import TOP
from app.models.knowledge_base import KnowledgeBase
from app.models.query import (
    NCQ,
    NESTED_SUBJECT,
    ConceptAtom,
    Const,
    Filter,
    FilteredQuery,
    RoleAtom,
    Term,
    Var,
    canonical_form,
    nested_filter_depth,
)
from app.models.subsumption import SubsumptionTable
from app.utils.logger import log_stage_event

logger = get_logger("services.rewriter")

FRESH_VARIABLE_PREFIX = "_y"


@dataclass(frozen=True, order=True)
class RewriteChoice:
    """Leaf variable x̂ and the axiom M ⊑ ∃s.N chosen for it."""

    variable: Var
    sub: str
    role: str
    filler: str

    def render(self) -> str:
        return f"{self.variable}: {self.sub} SUB some {self.role} . {self.filler}"


@dataclass
class RewriteStats:
    steps: int = 0
    duplicates: int = 0
    contradictions: int = 0
    depth_pruned: int = 0


def _atoms_on(query: NCQ, variable: Var):
    concepts = [a for a in query.atoms if isinstance(a, ConceptAtom) and a.term == variable]
    roles = [a for a in query.atoms if isinstance(a, RoleAtom) and a.object == variable]
    return concepts, roles


def predecessors(query: NCQ, variable: Var) -> Set[Term]:
    return {a.subject for a in query.atoms if isinstance(a, RoleAtom) and a.object == variable}


def is_contradictory(query: NCQ, table: SubsumptionTable) -> bool:
    """A positive atom entails a negated one on the same terms, or a positive atom is unsatisfiable."""
    positive_concepts: Dict[Term, Set[str]] = {}
    positive_roles: Dict[Tuple[Term, Term], Set[str]] = {}
    for atom in query.atoms:
        if atom.negated:
            continue
        if isinstance(atom, ConceptAtom):
            if table.is_unsatisfiable(atom.concept):
                return True
            positive_concepts.setdefault(atom.term, set()).add(atom.concept)
        else:
            positive_roles.setdefault((atom.subject, atom.object), set()).add(atom.role)
    for atom in query.atoms:
        if not atom.negated:
            continue
        if isinstance(atom, ConceptAtom):
            if atom.concept == TOP:
                return True
            if any(table.subsumes(a, atom.concept) for a in positive_concepts.get(atom.term, ())):
                return True
        else:
            pair = (atom.subject, atom.object)
            if any(table.role_subsumes(r, atom.role) for r in positive_roles.get(pair, ())):
                return True
    return False


class RewriterService:
    """Compute rew_T(φ) for a classified TBox."""

    def __init__(self, table: SubsumptionTable, concept_count: int, role_count: int):
        self.table = table
        # |NC_T| counts top and bot alongside the TBox concept names
        self.concept_count = concept_count + 2
        self.role_count = role_count
        self.stats = RewriteStats()
        self._fresh = 0

    @classmethod
    def for_kb(cls, kb: KnowledgeBase, table: SubsumptionTable) -> "RewriterService":
        return cls(table, len(kb.tbox_concept_names), len(kb.tbox_role_names))

    def depth_bound(self, query: NCQ) -> int:
        return len(query.variables) + self.concept_count ** 2 * self.role_count

    def quantified_leaves(self, query: FilteredQuery) -> List[Var]:
        answer = set(query.answer_variables)
        return sorted(v for v in query.leaf_variables() if v not in answer)

    def merge_target(self, query: FilteredQuery, variable: Var) -> Optional[Term]:
        """
        The term all predecessors of a leaf variable merge into: the one constant among them,
        else an answer variable, else the least variable. None when two constants would merge.
        """
        preds = predecessors(query, variable)
        constants = sorted(t for t in preds if isinstance(t, Const))
        if len(constants) > 1:
            return None
        if constants:
            return constants[0]
        for term in query.head:
            if term in preds:
                return term
        if preds:
            return sorted(preds)[0]
        self._fresh += 1
        return Var(f"{FRESH_VARIABLE_PREFIX}{self._fresh}")

    def applicable_choices(self, query: FilteredQuery) -> List[RewriteChoice]:
        table = self.table
        choices: Set[RewriteChoice] = set()
        for variable in self.quantified_leaves(query):
            if len([t for t in predecessors(query, variable) if isinstance(t, Const)]) > 1:
                continue
            concepts, roles = _atoms_on(query, variable)
            pos_concepts = [a.concept for a in concepts if not a.negated]
            neg_concepts = [a.concept for a in concepts if a.negated]
            pos_roles = [a.role for a in roles if not a.negated]
            neg_roles = [a.role for a in roles if a.negated]
            for axiom in table.told_existentials:
                for role in table.super_roles(axiom.role):
                    if not all(table.role_subsumes(role, r) for r in pos_roles):
                        continue
                    if any(table.role_subsumes(role, r) for r in neg_roles):
                        continue
                    for filler in table.subsumers(axiom.filler):
                        if not all(table.subsumes(filler, a) for a in pos_concepts):
                            continue
                        if any(table.subsumes(filler, a) for a in neg_concepts):
                            continue
                        choices.add(RewriteChoice(variable, axiom.sub, role, filler))
        return sorted(choices)

    def atypical_witnesses(self, query: FilteredQuery, choice: RewriteChoice) -> List[str]:
        """ℳ′: names whose told witnesses are structurally below ∃s.N and violate a negated atom on x̂."""
        table = self.table
        concepts, roles = _atoms_on(query, choice.variable)
        neg_concepts = [a.concept for a in concepts if a.negated]
        neg_roles = [a.role for a in roles if a.negated]
        found: Set[str] = set()
        for axiom in table.told_existentials:
            if not table.structurally_subsumed(axiom.role, axiom.filler, choice.role, choice.filler):
                continue
            violates = any(table.subsumes(axiom.filler, a) for a in neg_concepts) or any(
                table.role_subsumes(axiom.role, r) for r in neg_roles
            )
            if violates and not table.is_unsatisfiable(axiom.sub):
                found.add(axiom.sub)
        return table.maximal(found)

    def rewrite_step(self, query: FilteredQuery, choice: RewriteChoice) -> Optional[FilteredQuery]:
        """One rewriting step; None when the predecessors of x̂ cannot be merged."""
        variable = choice.variable
        target = self.merge_target(query, variable)
        if target is None:
            return None
        concepts, roles = _atoms_on(query, variable)
        excluded = self.atypical_witnesses(query, choice)

        mapping: Mapping[Term, Term] = {p: target for p in predecessors(query, variable)}
        kept_atoms = [a for a in query.atoms if variable not in a.terms]
        moved = [f for f in query.filters if f.subject == variable]
        kept_filters = [f for f in query.filters if f.subject != variable]

        new_filter = Filter(
            subject=target,
            role=choice.role,
            concepts=frozenset({choice.filler}),
            neg_concepts=frozenset(a.concept for a in concepts if a.negated),
            neg_roles=frozenset(a.role for a in roles if a.negated),
            nested=frozenset(Filter(NESTED_SUBJECT, f.role, f.concepts, f.neg_concepts, f.neg_roles, f.nested)
                             for f in moved),
        )
        base = FilteredQuery(
            head=query.head,
            atoms=frozenset(kept_atoms),
            filters=frozenset(kept_filters),
            location=query.location,
        ).rename(mapping)
        atoms = set(base.atoms)
        atoms.add(ConceptAtom(choice.sub, target))
        atoms |= {ConceptAtom(name, target, negated=True) for name in excluded}
        return FilteredQuery(
            head=base.head,
            atoms=frozenset(atoms),
            filters=base.filters | {new_filter},
            location=query.location,
        )

    def all_rewritings(self, query: NCQ, depth_bound: Optional[int] = None) -> List[FilteredQuery]:
        """
        Breadth-first closure of rewrite_step, deduplicated up to variable renaming.

        Contradictory rewritings are dropped together with everything derived from them,
        and rewritings deeper than the nested-filter bound are not kept. The input query
        always comes first.
        """
        start = FilteredQuery.from_ncq(query)
        bound = self.depth_bound(start) if depth_bound is None else depth_bound
        self.stats = RewriteStats()
        results: List[FilteredQuery] = [start]
        seen: Set[FilteredQuery] = {canonical_form(start)}
        frontier: Deque[FilteredQuery] = deque([start])
        while frontier:
            current = frontier.popleft()
            for choice in self.applicable_choices(current):
                rewritten = self.rewrite_step(current, choice)
                if rewritten is None:
                    continue
                self.stats.steps += 1
                if is_contradictory(rewritten, self.table):
                    self.stats.contradictions += 1
                    continue
                if nested_filter_depth(rewritten) > bound:
                    self.stats.depth_pruned += 1
                    continue
                key = canonical_form(rewritten)
                if key in seen:
                    self.stats.duplicates += 1
                    continue
                logger.debug(f"Rewrote with {choice.render()}")
                seen.add(key)
                results.append(rewritten)
                frontier.append(rewritten)
        log_stage_event(
            "rewritten",
            None,
            rewritings=len(results),
            steps=self.stats.steps,
            contradictions=self.stats.contradictions,
            depth_pruned=self.stats.depth_pruned,
            bound=bound,
        )
        return results


def all_rewritings(query: NCQ, kb: KnowledgeBase, table: SubsumptionTable) -> List[FilteredQuery]:
    return RewriterService.for_kb(kb, table).all_rewritings(query)

