"""
Evaluation of filtered queries and NCQs over finite interpretations, and atemporal
minimal-world answers.
"""
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from app.core.exceptions import KBValidationError
from app.core.logging import get_logger
from app.models.answer_set import AnswerSet, AnswerTuple
from app.models.concepts import TOP
from app.models.interpretation import FiniteInterpretation
from app.models.knowledge_base import KnowledgeBase
from app.models.mtncq import (
    MTNCQ,
    AndNode,
    FalseNode,
    Formula,
    Leaf,
    Not,
    OrNode,
    RewrittenLeaf,
    TrueNode,
)
from app.models.query import NCQ, Atom, ConceptAtom, Const, Filter, FilteredQuery, RoleAtom, Term, Var, filter_key
from app.models.subsumption import SubsumptionTable
from app.services.canonical_model_service import CanonicalModelService
from app.services.rewriter_service import RewriterService
from app.utils.logger import log_stage_event

logger = get_logger("services.query_eval")

Assignment = Dict[Var, str]


def _value(term: Term, assignment: Assignment) -> Optional[str]:
    if isinstance(term, Const):
        return term.name
    return assignment.get(term)


def atom_holds(atom: Atom, assignment: Assignment, interpretation: FiniteInterpretation) -> bool:
    if isinstance(atom, ConceptAtom):
        element = _value(atom.term, assignment)
        if element not in interpretation.domain:
            return atom.negated
        result = interpretation.has(atom.concept, element)
    else:
        subject, obj = _value(atom.subject, assignment), _value(atom.object, assignment)
        result = interpretation.holds(atom.role, subject, obj)
    return result != atom.negated


def filter_holds(f: Filter, element: str, interpretation: FiniteInterpretation) -> bool:
    """If some successor satisfies the guard, some successor satisfies the guard and the whole body."""
    guarded = [
        e for e in sorted(interpretation.successors(f.role, element))
        if all(interpretation.has(c, e) for c in f.concepts)
    ]
    if not guarded:
        return True
    for e in guarded:
        if any(interpretation.has(c, e) for c in f.neg_concepts):
            continue
        if any(interpretation.holds(r, element, e) for r in f.neg_roles):
            continue
        if all(filter_holds(n, e, interpretation) for n in f.nested):
            return True
    return False


def _ready(atom: Atom, assignment: Assignment) -> bool:
    return all(isinstance(t, Const) or t in assignment for t in atom.terms)


def _candidates(
    variable: Var,
    positive: Sequence[Atom],
    assignment: Assignment,
    interpretation: FiniteInterpretation,
    default: FrozenSet[str],
) -> FrozenSet[str]:
    pool = default
    for atom in positive:
        if isinstance(atom, ConceptAtom) and atom.term == variable and atom.concept != TOP:
            pool = pool & interpretation.extension(atom.concept)
        elif isinstance(atom, RoleAtom):
            if atom.object == variable and atom.subject != variable:
                subject = _value(atom.subject, assignment)
                if subject is not None:
                    pool = pool & interpretation.successors(atom.role, subject)
            elif atom.subject == variable and atom.object != variable:
                obj = _value(atom.object, assignment)
                if obj is not None:
                    pool = pool & interpretation.predecessors(atom.role, obj)
    return pool


def matches(query: NCQ, interpretation: FiniteInterpretation) -> Iterator[Assignment]:
    """
    All assignments satisfying the atoms and filters of a query.

    Answer variables range over named elements only. The next variable to bind is always
    the one with the fewest remaining candidates.
    """
    variables = sorted(query.variables)
    answer = set(query.answer_variables)
    named = frozenset(interpretation.named)
    domain = frozenset(interpretation.domain)
    positive = [a for a in query.atoms if not a.negated]
    atoms = sorted(query.atoms, key=lambda a: (a.negated, isinstance(a, RoleAtom)))
    filters: List[Filter] = sorted(getattr(query, "filters", frozenset()), key=filter_key)

    def consistent(assignment: Assignment, variable: Optional[Var]) -> bool:
        for atom in atoms:
            if (variable is None or variable in atom.terms) and _ready(atom, assignment):
                if not atom_holds(atom, assignment, interpretation):
                    return False
        for f in filters:
            if (variable is None or f.subject == variable) and (isinstance(f.subject, Const) or f.subject in assignment):
                if not filter_holds(f, _value(f.subject, assignment), interpretation):
                    return False
        return True

    def search(assignment: Assignment) -> Iterator[Assignment]:
        unbound = [v for v in variables if v not in assignment]
        if not unbound:
            yield dict(assignment)
            return
        best, best_pool = None, None
        for v in unbound:
            pool = _candidates(v, positive, assignment, interpretation, named if v in answer else domain)
            if best_pool is None or len(pool) < len(best_pool):
                best, best_pool = v, pool
        for element in sorted(best_pool):
            assignment[best] = element
            if consistent(assignment, best):
                yield from search(assignment)
            del assignment[best]

    if consistent({}, None):
        yield from search({})


def answer_tuple(head: Sequence[Term], assignment: Assignment) -> AnswerTuple:
    return tuple(_value(term, assignment) for term in head)


def eval_filtered(query: FilteredQuery, interpretation: FiniteInterpretation) -> Set[AnswerTuple]:
    return {answer_tuple(query.head, a) for a in matches(query, interpretation)}


def eval_ncq_direct(query: NCQ, interpretation: FiniteInterpretation) -> Set[AnswerTuple]:
    """
    Plain first-order evaluation by backtracking over the variables in a fixed order:
    answer variables first, then along role atoms.
    """
    order: List[Var] = list(query.answer_variables)
    remaining = sorted(query.variables - set(order))
    while remaining:
        linked = [
            v for v in remaining
            if any(isinstance(a, RoleAtom) and not a.negated and v in a.terms
                   and any(t in order or isinstance(t, Const) for t in a.terms if t != v)
                   for a in query.atoms)
        ]
        pick = linked[0] if linked else remaining[0]
        order.append(pick)
        remaining.remove(pick)

    answer = set(query.answer_variables)
    named = sorted(interpretation.named)
    domain = list(interpretation.domain)
    atoms = list(query.atoms)
    results: Set[AnswerTuple] = set()

    def step(index: int, assignment: Assignment) -> None:
        if index == len(order):
            results.add(answer_tuple(query.head, assignment))
            return
        variable = order[index]
        pool = named if variable in answer else domain
        link = next(
            (a for a in atoms if isinstance(a, RoleAtom) and not a.negated and a.object == variable
             and a.subject != variable and _value(a.subject, assignment) is not None),
            None,
        )
        if link is not None:
            pool = [e for e in pool if e in interpretation.successors(link.role, _value(link.subject, assignment))]
        for element in pool:
            assignment[variable] = element
            if all(atom_holds(a, assignment, interpretation) for a in atoms if variable in a.terms and _ready(a, assignment)):
                step(index + 1, assignment)
            del assignment[variable]

    ground = [a for a in atoms if _ready(a, {})]
    if all(atom_holds(a, {}, interpretation) for a in ground):
        step(0, {})
    return results


def candidate_tuples(individuals: Sequence[str], arity: int) -> List[AnswerTuple]:
    return [tuple(t) for t in product(sorted(individuals), repeat=arity)]


def project(answer: AnswerTuple, head: Sequence[Var], sub_head: Sequence[Term]) -> AnswerTuple:
    positions = {v: i for i, v in enumerate(head)}
    return tuple(answer[positions[v]] if isinstance(v, Var) else v.name for v in sub_head)


class QueryEvalService:
    """Minimal-world answers over an atemporal knowledge base."""

    def __init__(self, kb: KnowledgeBase, table: SubsumptionTable, depth_bound: Optional[int] = None):
        self.kb = kb
        self.table = table
        self.depth_bound = depth_bound
        self.rewriter = RewriterService.for_kb(kb, table)
        self._named: Optional[FiniteInterpretation] = None

    @property
    def named_part(self) -> FiniteInterpretation:
        if self._named is None:
            self._named = CanonicalModelService(self.kb, self.table).build_named_part()
        return self._named

    def rewritings(self, query: NCQ) -> List[FilteredQuery]:
        return self.rewriter.all_rewritings(query, self.depth_bound)

    def mwa_atemporal(self, query: NCQ) -> Set[AnswerTuple]:
        """Union of the answers of all rewritings over I_A."""
        result: Set[AnswerTuple] = set()
        for rewriting in self.rewritings(query):
            result |= eval_filtered(rewriting, self.named_part)
        return result

    def answer(self, query: MTNCQ) -> AnswerSet:
        """Answers of a Boolean combination of NCQs; negation is the complement in Ind(K)^k."""
        if query.is_temporal:
            raise KBValidationError("temporal operators need a temporal knowledge base", query.location)
        individuals = sorted(self.named_part.named)
        universe = candidate_tuples(individuals, len(query.head))
        result = self._formula(query.formula, query.head, universe)
        log_stage_event("answered", self.kb.source, engine="rewrite", answers=len(result))
        return AnswerSet.atemporal(len(query.head), result)

    def _formula(self, node: Formula, head: Tuple[Var, ...], universe: List[AnswerTuple]) -> Set[AnswerTuple]:
        if isinstance(node, (Leaf, RewrittenLeaf)):
            leaf_answers = self.mwa_atemporal(node.query)
            return {t for t in universe if project(t, head, node.query.head) in leaf_answers}
        if isinstance(node, TrueNode):
            return set(universe)
        if isinstance(node, FalseNode):
            return set()
        if isinstance(node, Not):
            return set(universe) - self._formula(node.child, head, universe)
        if isinstance(node, AndNode):
            return self._formula(node.left, head, universe) & self._formula(node.right, head, universe)
        if isinstance(node, OrNode):
            return self._formula(node.left, head, universe) | self._formula(node.right, head, universe)
        raise KBValidationError("temporal operators need a temporal knowledge base")


def mwa_atemporal(query: NCQ, kb: KnowledgeBase, table: SubsumptionTable) -> Set[AnswerTuple]:
    return QueryEvalService(kb, table).mwa_atemporal(query)
