"""
Metric temporal query answering over a temporal knowledge base.

NCQ leaves are replaced by the disjunction of their rewritings, which are evaluated on the
snapshots of the finite structure over the representative time points. Temporal operators
are evaluated on a timeline that lists every time point within N+1 of a representative
individually and collapses each remaining stretch of ℤ into one run; a run carries the
truth value of the covered point next to it.
"""
from bisect import bisect_right
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from app.core.config import settings
from app.core.exceptions import KBValidationError
from app.core.logging import get_logger
from app.models.answer_set import AnswerSet, AnswerTuple
from app.models.interval_set import NEG_INF, POS_INF, Bound, IntervalSet
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
    map_leaves,
    render_formula,
    walk,
)
from app.models.query import is_rooted, render_ncq
from app.models.subsumption import SubsumptionTable
from app.models.temporal import TemporalStructure, VirtualPoint
from app.services.query_eval_service import candidate_tuples, eval_filtered, project
from app.services.rewriter_service import RewriterService
from app.services.temporal_saturation_service import TemporalSaturationService
from app.utils.bit_arithmetic import bit_compare, bits_needed
from app.utils.logger import log_stage_event

logger = get_logger("services.mtncq")

Slot = Tuple[Bound, Bound]

COMPARATORS = ("integer", "bits")


def compute_n(formula: Formula) -> int:
    """Sum of the absolute finite interval bounds of all temporal operators (NEXT and PREV count 2)."""
    total = 0
    for node in walk(formula):
        if isinstance(node, (Until, Since, Box, Dia)):
            total += sum(abs(b) for b in node.interval.finite_bounds())
        elif isinstance(node, (Next, Prev)):
            total += 2
    return total


def rep_check(t: int, n: int, representatives: Sequence[int]) -> bool:
    """No representative lies strictly between t and t+n (t+n itself included)."""
    if n > 0:
        return not any(t < r <= t + n for r in representatives)
    if n < 0:
        return not any(t + n <= r < t for r in representatives)
    return True


class IntegerComparator:
    def offset_within(self, u: int, v: int, lo: Bound, hi: Bound) -> bool:
        """lo ≤ v − u ≤ hi"""
        return (lo == NEG_INF or v - u >= lo) and (hi == POS_INF or v - u <= hi)


class BitComparator:
    """Window checks through the sign-magnitude bit predicates."""

    def __init__(self, nbits: int):
        self.nbits = nbits

    def offset_within(self, u: int, v: int, lo: Bound, hi: Bound) -> bool:
        if lo != NEG_INF and not bit_compare(u, v, ">=", int(lo), self.nbits):
            return False
        if hi != POS_INF and not bit_compare(u, v, "<=", int(hi), self.nbits):
            return False
        return True


@dataclass(frozen=True)
class Timeline:
    """Consecutive slots covering ℤ: single covered points and the runs between them."""

    slots: Tuple[Slot, ...]
    starts: Tuple[Bound, ...]
    reps: Tuple[int, ...]
    slot_reps: Tuple[int, ...]

    @classmethod
    def build(cls, representatives: Sequence[int], n: int) -> "Timeline":
        reps = tuple(sorted(representatives))
        covered: Set[int] = set()
        for r in reps:
            covered.update(range(r - n - 1, r + n + 2))
        points = sorted(covered)
        slots: List[Slot] = [(NEG_INF, points[0] - 1)]
        for previous, point in zip([None] + points[:-1], points):
            if previous is not None and point > previous + 1:
                slots.append((previous + 1, point - 1))
            slots.append((point, point))
        slots.append((points[-1] + 1, POS_INF))
        slot_reps = tuple(cls._rep_for(lo, hi, reps) for lo, hi in slots)
        return cls(tuple(slots), tuple(lo for lo, _ in slots), reps, slot_reps)

    @staticmethod
    def _rep_for(lo: Bound, hi: Bound, reps: Sequence[int]) -> int:
        """The valid representative of every point in a slot: the last one at or before it, else the first."""
        anchor = hi if lo == NEG_INF else lo
        index = bisect_right(reps, anchor) - 1
        return reps[index] if index >= 0 else reps[0]

    def __len__(self) -> int:
        return len(self.slots)

    def slot_of(self, point: int) -> int:
        return bisect_right(self.starts, point) - 1

    def is_point(self, index: int) -> bool:
        lo, hi = self.slots[index]
        return lo == hi


class TemporalEvaluator:
    """Truth values of a lifted formula per slot, memoised per (subformula, tuple)."""

    def __init__(
        self,
        head: Tuple,
        structure: TemporalStructure,
        n: int,
        comparator,
    ):
        self.head = head
        self.structure = structure
        self.n = n
        self.comparator = comparator
        self.timeline = Timeline.build(structure.representatives, n)
        # keyed by node identity
        self._leaf_answers: Dict[Tuple[int, int], Set[AnswerTuple]] = {}
        self._memo: Dict[Tuple[int, AnswerTuple], List[bool]] = {}

    def values(self, node: Formula, answer: AnswerTuple) -> List[bool]:
        key = (id(node), answer)
        if key not in self._memo:
            self._memo[key] = self._evaluate(node, answer)
        return self._memo[key]

    def holds_at(self, node: Formula, answer: AnswerTuple, point: int) -> bool:
        return self.values(node, answer)[self.timeline.slot_of(point)]

    def intervals(self, node: Formula, answer: AnswerTuple) -> IntervalSet:
        values = self.values(node, answer)
        return IntervalSet.of(slot for slot, value in zip(self.timeline.slots, values) if value)

    def leaf_answers(self, leaf: RewrittenLeaf, rep: int) -> Set[AnswerTuple]:
        key = (id(leaf), rep)
        if key not in self._leaf_answers:
            snapshot = self.structure.snapshot(rep)
            found: Set[AnswerTuple] = set()
            for disjunct in leaf.disjuncts:
                found |= eval_filtered(disjunct, snapshot)
            self._leaf_answers[key] = found
        return self._leaf_answers[key]

    def _evaluate(self, node: Formula, answer: AnswerTuple) -> List[bool]:
        size = len(self.timeline)
        if isinstance(node, TrueNode):
            return [True] * size
        if isinstance(node, FalseNode):
            return [False] * size
        if isinstance(node, Leaf):
            raise KBValidationError(f"leaf {render_ncq(node.query)} was not rewritten")
        if isinstance(node, RewrittenLeaf):
            projected = project(answer, self.head, node.query.head)
            return [projected in self.leaf_answers(node, rep) for rep in self.timeline.slot_reps]
        if isinstance(node, Not):
            return [not v for v in self.values(node.child, answer)]
        if isinstance(node, AndNode):
            left, right = self.values(node.left, answer), self.values(node.right, answer)
            return [a and b for a, b in zip(left, right)]
        if isinstance(node, OrNode):
            left, right = self.values(node.left, answer), self.values(node.right, answer)
            return [a or b for a, b in zip(left, right)]
        if isinstance(node, Until):
            return self._temporal(lambda p: self._until(node, answer, p))
        if isinstance(node, Since):
            return self._temporal(lambda p: self._since(node, answer, p))
        if isinstance(node, Dia):
            return self._temporal(lambda p: self._window(node.interval, self.values(node.child, answer), p, any))
        if isinstance(node, Box):
            return self._temporal(lambda p: self._window(node.interval, self.values(node.child, answer), p, all))
        if isinstance(node, Next):
            interval = TemporalInterval(1, 1)
            return self._temporal(lambda p: self._window(interval, self.values(node.child, answer), p, any))
        if isinstance(node, Prev):
            interval = TemporalInterval(-1, -1)
            return self._temporal(lambda p: self._window(interval, self.values(node.child, answer), p, any))
        raise TypeError(f"unknown formula node {node!r}")

    def _temporal(self, at_point) -> List[bool]:
        """Evaluate at every single-point slot; runs copy the neighbouring covered point."""
        timeline = self.timeline
        result: List[Optional[bool]] = [None] * len(timeline)
        for index, (lo, hi) in enumerate(timeline.slots):
            if lo == hi:
                result[index] = at_point(int(lo))
        for index in range(len(result)):
            if result[index] is None:
                neighbour = index + 1 if index == 0 else index - 1
                result[index] = result[neighbour]
        return result

    def _until(self, node: Until, answer: AnswerTuple, p: int) -> bool:
        """Some j with j − p in the interval satisfies the right operand, the left one holds on [p, j)."""
        left, right = self.values(node.left, answer), self.values(node.right, answer)
        c1, c2 = node.interval.lo, node.interval.hi
        timeline = self.timeline
        phi_ok = True
        for m in range(timeline.slot_of(p), len(timeline)):
            lo, hi = timeline.slots[m]
            j = max(lo, p + c1)
            if right[m] and j <= hi and self.comparator.offset_within(p, int(j), c1, c2):
                if phi_ok and (j == lo or left[m]):
                    return True
            phi_ok = phi_ok and left[m]
            if not phi_ok or hi >= p + c2:
                break
        return False

    def _since(self, node: Since, answer: AnswerTuple, p: int) -> bool:
        """Some j with p − j in the interval satisfies the right operand, the left one holds on (j, p]."""
        left, right = self.values(node.left, answer), self.values(node.right, answer)
        c1, c2 = node.interval.lo, node.interval.hi
        timeline = self.timeline
        phi_ok = True
        for m in range(timeline.slot_of(p), -1, -1):
            lo, hi = timeline.slots[m]
            j = min(hi, p - c1)
            if right[m] and j >= lo and self.comparator.offset_within(int(j), p, c1, c2):
                if phi_ok and (j == hi or left[m]):
                    return True
            phi_ok = phi_ok and left[m]
            if not phi_ok or lo <= p - c2:
                break
        return False

    def _window(self, interval: TemporalInterval, child: List[bool], p: int, combine) -> bool:
        """any/all of the child over the slots meeting [p + lo, p + hi]."""
        a, b = interval.lo, interval.hi
        w = min(max(p, p + a), p + b)
        first = 0 if a == NEG_INF else self.timeline.slot_of(int(p + a))
        last = len(self.timeline) - 1 if b == POS_INF else self.timeline.slot_of(int(p + b))
        inside = []
        for m in range(first, last + 1):
            lo, hi = self.timeline.slots[m]
            u = min(max(w, lo), hi)
            if self.comparator.offset_within(p, int(u), a, b):
                inside.append(child[m])
        return combine(inside)


class MtncqService:
    """Answer MTNCQs over a normalized temporal knowledge base."""

    def __init__(
        self,
        kb: KnowledgeBase,
        table: SubsumptionTable,
        comparator: str = "integer",
        n_override: Optional[int] = None,
        depth_bound: Optional[int] = None,
    ):
        if comparator not in COMPARATORS:
            raise KBValidationError(f"unknown comparator {comparator}")
        self.kb = kb
        self.table = table
        self.comparator_kind = comparator
        self.n_override = n_override
        self.depth_bound = depth_bound
        self.rewriter = RewriterService.for_kb(kb, table)
        self._structure: Optional[TemporalStructure] = None
        self._evaluators: Dict[int, Tuple[MTNCQ, TemporalEvaluator]] = {}

    @property
    def structure(self) -> TemporalStructure:
        if self._structure is None:
            self._structure = TemporalSaturationService(self.kb, self.table).build_temporal_structure()
        return self._structure

    def lift_rewrite(self, query: MTNCQ) -> MTNCQ:
        """Replace every NCQ leaf by the disjunction of its rewritings."""

        def lift(leaf):
            if isinstance(leaf, RewrittenLeaf):
                return leaf
            if not is_rooted(leaf.query):
                raise KBValidationError(
                    f"leaf {render_ncq(leaf.query)} is not rooted; temporal answering needs rooted leaves",
                    query.location,
                )
            return RewrittenLeaf(leaf.query, tuple(self.rewriter.all_rewritings(leaf.query, self.depth_bound)))

        return MTNCQ(head=query.head, formula=map_leaves(query.formula, lift), location=query.location)

    def constant_n(self, lifted: MTNCQ) -> int:
        return compute_n(lifted.formula) if self.n_override is None else self.n_override

    def evaluator(self, lifted: MTNCQ) -> TemporalEvaluator:
        cached = self._evaluators.get(id(lifted))
        if cached is None or cached[0] is not lifted:
            n = self.constant_n(lifted)
            structure = self.structure
            cached = (lifted, TemporalEvaluator(lifted.head, structure, n, self._comparator(lifted, structure, n)))
            self._evaluators[id(lifted)] = cached
        return cached[1]

    def answer_intervals(self, query: MTNCQ) -> AnswerSet:
        lifted = self.lift_rewrite(query)
        evaluator = self.evaluator(lifted)
        answers: Dict[AnswerTuple, IntervalSet] = {}
        for answer in candidate_tuples(self.structure.individuals, len(lifted.head)):
            answers[answer] = evaluator.intervals(lifted.formula, answer)
        result = AnswerSet.from_map(len(lifted.head), answers)
        log_stage_event(
            "answered",
            self.kb.source,
            engine="rewrite",
            answers=len(result),
            n=evaluator.n,
            slots=len(evaluator.timeline),
        )
        return result

    def eval_at(self, lifted: MTNCQ, answer: AnswerTuple, point: VirtualPoint) -> bool:
        """Truth of a lifted formula at the virtual point t+n addressed through representative t."""
        reps = self.structure.representatives
        if point.t not in reps or not rep_check(point.t, point.n, reps):
            raise KBValidationError(f"{point.t}{point.n:+d} is not addressed through a valid representative")
        return self.evaluator(lifted).holds_at(lifted.formula, answer, point.value)

    def skeleton(self, query: MTNCQ) -> str:
        lifted = self.lift_rewrite(query)
        head = ",".join(str(v) for v in lifted.head)
        return f"q({head}) := {render_formula(lifted.formula)}\nN = {self.constant_n(lifted)}"

    def _comparator(self, lifted: MTNCQ, structure: TemporalStructure, n: int):
        if self.comparator_kind == "integer":
            return IntegerComparator()
        bounds = [b for node in walk(lifted.formula)
                  if isinstance(node, (Until, Since, Box, Dia)) for b in node.interval.finite_bounds()]
        reach = n + 2 + max((abs(b) for b in bounds), default=1)
        extremes = [r + sign * reach for r in structure.representatives for sign in (-1, 1)]
        nbits = bits_needed(*extremes) + 1
        if nbits > settings.TIME_BITS:
            raise KBValidationError(f"time points need {nbits} magnitude bits, more than TIME_BITS={settings.TIME_BITS}")
        logger.debug(f"Bit comparator with {nbits} magnitude bits")
        return BitComparator(nbits)
