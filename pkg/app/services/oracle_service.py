"""
Brute-force reference answers: queries evaluated directly over depth-bounded
expansions of the canonical model, with no rewriting involved.
"""
from typing import Dict, List, Optional, Set, Tuple

import networkx as nx

from app.core.config import settings
from app.core.exceptions import KBValidationError, RefusalError
from app.core.logging import get_logger
from app.models.answer_set import AnswerSet, AnswerTuple
from app.models.axioms import DiamCI
from app.models.interpretation import FiniteInterpretation
from app.models.interval_set import NEG_INF, POS_INF, IntervalSet
from app.models.knowledge_base import KnowledgeBase
from app.models.mtncq import (
    MTNCQ,
    AndNode,
    Box,
    Dia,
    FalseNode,
    Formula,
    Leaf,
    Next,
    Not,
    OrNode,
    Prev,
    RewrittenLeaf,
    Since,
    TemporalInterval,
    TrueNode,
    Until,
    temporal_depth,
)
from app.models.query import NCQ, is_rooted, nested_filter_depth
from app.models.subsumption import SubsumptionTable
from app.services.canonical_model_service import CanonicalModelService, expand_canonical
from app.services.mtncq_service import compute_n
from app.services.query_eval_service import candidate_tuples, eval_ncq_direct, project
from app.services.temporal_saturation_service import TemporalSaturationService
from app.utils.logger import log_stage_event

logger = get_logger("services.oracle")


def witness_graph(table: SubsumptionTable) -> nx.DiGraph:
    """Filler N′ → N″ whenever an element typed N′ entails a told ∃r.N″."""
    graph = nx.DiGraph()
    fillers = sorted({axiom.filler for axiom in table.told_existentials})
    graph.add_nodes_from(fillers)
    for source in fillers:
        types = table.closure([source])
        for axiom in table.told_existentials:
            if axiom.sub in types and not table.is_unsatisfiable(axiom.filler):
                graph.add_edge(source, axiom.filler)
    return graph


def is_cyclic(table: SubsumptionTable) -> bool:
    return not nx.is_directed_acyclic_graph(witness_graph(table))


def full_expansion_depth(table: SubsumptionTable) -> int:
    """Depth at which the expansion of an acyclic TBox is complete."""
    graph = witness_graph(table)
    if graph.number_of_nodes() == 0:
        return 0
    return nx.dag_longest_path_length(graph) + 1


def locality_depth(query: NCQ) -> int:
    return len(query.variables) + nested_filter_depth(query) + 1


def default_window(kb: KnowledgeBase, query: MTNCQ) -> int:
    """N plus the largest convex diamond bound plus 2."""
    bounds = [axiom.op.n for axiom in kb.tbox if isinstance(axiom, DiamCI) and axiom.op.n is not None]
    return compute_n(query.formula) + max(bounds, default=0) + 2


class OracleService:
    """Reference semantics for cross-checking the rewriting pipeline at desk scale."""

    def __init__(self, kb: KnowledgeBase, table: SubsumptionTable, depth: Optional[int] = None):
        self.kb = kb
        self.table = table
        self.depth = settings.ORACLE_DEPTH if depth is None else depth
        self.cyclic = is_cyclic(table)

    def required_depth(self, queries: List[NCQ]) -> int:
        """Expansion depth the answers of the given leaves are guaranteed stable at."""
        if not self.cyclic:
            return max(self.depth, full_expansion_depth(self.table))
        for query in queries:
            if not is_rooted(query):
                raise RefusalError("the TBox is cyclic and the query is not rooted; no finite expansion is exact")
        needed = max((locality_depth(q) for q in queries), default=1)
        if self.depth < needed:
            logger.warning(f"Refusing oracle run: cyclic TBox needs depth {needed}, got {self.depth}")
            raise RefusalError(f"the TBox is cyclic and depth {self.depth} is below the locality bound {needed}")
        return self.depth

    def expanded_named_part(self, depth: int) -> FiniteInterpretation:
        named = CanonicalModelService(self.kb, self.table).build_named_part()
        return expand_canonical(named, self.table, depth)

    def oracle_atemporal(self, query: NCQ) -> Set[AnswerTuple]:
        depth = self.required_depth([query])
        return eval_ncq_direct(query, self.expanded_named_part(depth))

    def answer(self, query: MTNCQ, window: Optional[int] = None) -> AnswerSet:
        """Atemporal answers over Ind^k, or temporal answers inside [min tem − W, max tem + W]."""
        if self.kb.is_temporal:
            return self.oracle_temporal(query, window)
        if query.is_temporal:
            raise KBValidationError("temporal operators need a temporal knowledge base", query.location)
        leaves = [leaf.query for leaf in query.leaves]
        depth = self.required_depth(leaves)
        expanded = self.expanded_named_part(depth)
        universe = candidate_tuples(sorted(expanded.named), len(query.head))
        result = _atemporal_formula(query.formula, query.head, universe, expanded)
        log_stage_event("answered", self.kb.source, engine="oracle", answers=len(result), depth=depth)
        return AnswerSet.atemporal(len(query.head), result)

    def oracle_temporal(self, query: MTNCQ, window: Optional[int] = None) -> AnswerSet:
        leaves = [leaf.query for leaf in query.leaves]
        depth = self.required_depth(leaves)
        extensions = TemporalSaturationService(self.kb, self.table).saturate()
        tem = sorted(extensions.tem) or self.kb.tem
        n = compute_n(query.formula)
        inner = default_window(self.kb, query) if window is None else window
        if inner < 0:
            raise KBValidationError(f"window {inner} must not be negative")
        # Every subformula is constant on each side beyond the margin.
        margin = (temporal_depth(query.formula) + 1) * (n + 2)
        inner_lo, inner_hi = tem[0] - inner, tem[-1] + inner
        timeline = range(inner_lo - margin, inner_hi + margin + 1)

        expansions: Dict[Tuple, FiniteInterpretation] = {}
        models: List[FiniteInterpretation] = []
        for i in timeline:
            key = extensions.snapshot_key(i)
            if key not in expansions:
                expansions[key] = expand_canonical(extensions.snapshot(i), self.table, depth)
            models.append(expansions[key])

        evaluator = _WindowEvaluator(query.head, list(timeline), models)
        answers: Dict[AnswerTuple, IntervalSet] = {}
        for answer in candidate_tuples(sorted(extensions.individuals), len(query.head)):
            values = evaluator.values(query.formula, answer)
            points = [i for i, v in zip(timeline, values) if v and inner_lo <= i <= inner_hi]
            answers[answer] = IntervalSet.from_points(points)
        result = AnswerSet.from_map(len(query.head), answers)
        log_stage_event(
            "answered",
            self.kb.source,
            engine="oracle",
            answers=len(result),
            window=[inner_lo, inner_hi],
            snapshots=len(expansions),
        )
        return result


def _atemporal_formula(
    node: Formula, head, universe: List[AnswerTuple], model: FiniteInterpretation
) -> Set[AnswerTuple]:
    if isinstance(node, (Leaf, RewrittenLeaf)):
        found = eval_ncq_direct(node.query, model)
        return {t for t in universe if project(t, head, node.query.head) in found}
    if isinstance(node, TrueNode):
        return set(universe)
    if isinstance(node, FalseNode):
        return set()
    if isinstance(node, Not):
        return set(universe) - _atemporal_formula(node.child, head, universe, model)
    if isinstance(node, AndNode):
        return _atemporal_formula(node.left, head, universe, model) & _atemporal_formula(node.right, head, universe, model)
    if isinstance(node, OrNode):
        return _atemporal_formula(node.left, head, universe, model) | _atemporal_formula(node.right, head, universe, model)
    raise KBValidationError("temporal operators need a temporal knowledge base")


class _WindowEvaluator:
    """Pointwise evaluation over an explicit finite sequence of models."""

    def __init__(self, head, timeline: List[int], models: List[FiniteInterpretation]):
        self.head = head
        self.timeline = timeline
        self.models = models
        self._leaves: Dict[Tuple[int, int], Set[AnswerTuple]] = {}
        self._memo: Dict[Tuple[int, AnswerTuple], List[bool]] = {}

    def values(self, node: Formula, answer: AnswerTuple) -> List[bool]:
        key = (id(node), answer)
        if key not in self._memo:
            self._memo[key] = self._evaluate(node, answer)
        return self._memo[key]

    def _leaf(self, node, index: int) -> Set[AnswerTuple]:
        model = self.models[index]
        key = (id(node), id(model))
        if key not in self._leaves:
            self._leaves[key] = eval_ncq_direct(node.query, model)
        return self._leaves[key]

    def _evaluate(self, node: Formula, answer: AnswerTuple) -> List[bool]:
        size = len(self.timeline)
        if isinstance(node, TrueNode):
            return [True] * size
        if isinstance(node, FalseNode):
            return [False] * size
        if isinstance(node, (Leaf, RewrittenLeaf)):
            projected = project(answer, self.head, node.query.head)
            return [projected in self._leaf(node, k) for k in range(size)]
        if isinstance(node, Not):
            return [not v for v in self.values(node.child, answer)]
        if isinstance(node, AndNode):
            return [a and b for a, b in zip(self.values(node.left, answer), self.values(node.right, answer))]
        if isinstance(node, OrNode):
            return [a or b for a, b in zip(self.values(node.left, answer), self.values(node.right, answer))]
        if isinstance(node, Until):
            return self._until(node.interval, self.values(node.left, answer), self.values(node.right, answer), 1)
        if isinstance(node, Since):
            return self._until(node.interval, self.values(node.left, answer), self.values(node.right, answer), -1)
        if isinstance(node, Dia):
            return self._window(node.interval, self.values(node.child, answer), any)
        if isinstance(node, Box):
            return self._window(node.interval, self.values(node.child, answer), all)
        if isinstance(node, Next):
            return self._window(TemporalInterval(1, 1), self.values(node.child, answer), any)
        if isinstance(node, Prev):
            return self._window(TemporalInterval(-1, -1), self.values(node.child, answer), any)
        raise TypeError(f"unknown formula node {node!r}")

    def _until(self, interval: TemporalInterval, left: List[bool], right: List[bool], direction: int) -> List[bool]:
        """k in the interval with the right operand at i ± k and the left one at i ± j for 0 ≤ j < k."""
        size = len(self.timeline)
        edge = -1 if direction == 1 else 0
        left_edge, right_edge = left[edge], right[edge]
        result = []
        for i in range(size):
            holds = False
            k = 0
            while 0 <= i + direction * k < size and (interval.hi == POS_INF or k <= interval.hi):
                position = i + direction * k
                if k >= interval.lo and right[position]:
                    holds = True
                    break
                if not left[position]:
                    break
                k += 1
            else:
                # Past the timeline both operands keep their edge values.
                if not 0 <= i + direction * k < size:
                    first = max(k, interval.lo)
                    if interval.hi == POS_INF or first <= interval.hi:
                        holds = right_edge and (first == k or left_edge)
            result.append(holds)
        return result

    def _window(self, interval: TemporalInterval, child: List[bool], combine) -> List[bool]:
        """Positions outside the timeline take the value at the nearer edge."""
        size = len(self.timeline)
        result = []
        for i in range(size):
            lo = interval.lo if interval.lo == NEG_INF else i + int(interval.lo)
            hi = interval.hi if interval.hi == POS_INF else i + int(interval.hi)
            seen = []
            if lo < 0:
                seen.append(child[0])
            if hi > size - 1:
                seen.append(child[-1])
            first, last = max(0, lo), min(size - 1, hi)
            if first <= last:
                seen.extend(child[int(first):int(last) + 1])
            result.append(combine(seen))
        return result


def endomorphism_test(interpretation: FiniteInterpretation) -> bool:
    """
    True iff the identity is the only endomorphism fixing the named elements.

    Elements are mapped parents first, so every anonymous element only ranges over
    successors of its parent's image.
    """
    size = len(interpretation)
    if size > settings.ORACLE_MAX_DOMAIN:
        raise RefusalError(f"domain of {size} elements exceeds ORACLE_MAX_DOMAIN={settings.ORACLE_MAX_DOMAIN}")
    named = sorted(interpretation.named)
    depth = interpretation.depth
    order = sorted(interpretation.anonymous(), key=lambda d: (depth.get(d, 0), d))
    domain = list(interpretation.domain)
    edges = [(d, e, interpretation.roles_between(d, e)) for d, e in sorted(interpretation.edge_pairs())]

    def consistent(mapping: Dict[str, str], element: str) -> bool:
        if not interpretation.type_of(element) <= interpretation.type_of(mapping[element]):
            return False
        for d, e, roles in edges:
            if element not in (d, e) or d not in mapping or e not in mapping:
                continue
            if not roles <= interpretation.roles_between(mapping[d], mapping[e]):
                return False
        return True

    mapping: Dict[str, str] = {a: a for a in named}
    if not all(consistent(mapping, a) for a in named):
        return False

    def search(index: int) -> bool:
        """True when a non-identity endomorphism extends the current mapping."""
        if index == len(order):
            return any(mapping[d] != d for d in order)
        element = order[index]
        parent = interpretation.parent.get(element)
        if parent is not None:
            pool = set()
            for role in interpretation.roles_between(parent, element):
                pool |= interpretation.successors(role, mapping[parent])
            candidates = sorted(pool)
        else:
            candidates = domain
        for image in candidates:
            mapping[element] = image
            if consistent(mapping, element) and search(index + 1):
                return True
            del mapping[element]
        return False

    return not search(0)
