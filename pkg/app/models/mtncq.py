"""
Metric temporal queries: Boolean and metric temporal operators over NCQ leaves.

Intervals of U and S range over ℕ; Box and Dia intervals may reach into the past.
Leaves rewritten by the atemporal rewriter become RewrittenLeaf nodes, which turns a
query tree into the MFOTL formula the virtual-point evaluator runs on.
"""
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional, Tuple, Union

from app.core.exceptions import KBValidationError, SourceLocation
from app.models.interval_set import NEG_INF, POS_INF, Bound, render_bound
from app.models.query import FilteredQuery, Term, Var, render_ncq


@dataclass(frozen=True)
class TemporalInterval:
    lo: Bound
    hi: Bound

    def __post_init__(self):
        if self.lo == POS_INF:
            raise KBValidationError("inf is only allowed as an upper bound")
        if self.hi == NEG_INF:
            raise KBValidationError("-inf is only allowed as a lower bound")
        if self.lo > self.hi:
            raise KBValidationError(f"malformed interval [{render_bound(self.lo)},{render_bound(self.hi)}]")

    @property
    def is_natural(self) -> bool:
        return self.lo >= 0

    def finite_bounds(self) -> List[int]:
        return [int(b) for b in (self.lo, self.hi) if b not in (NEG_INF, POS_INF)]

    def __str__(self) -> str:
        return f"[{render_bound(self.lo)},{render_bound(self.hi)}]"


@dataclass(frozen=True)
class Leaf:
    query: FilteredQuery


@dataclass(frozen=True)
class RewrittenLeaf:
    query: FilteredQuery
    disjuncts: Tuple[FilteredQuery, ...]


@dataclass(frozen=True)
class TrueNode:
    pass


@dataclass(frozen=True)
class FalseNode:
    pass


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class AndNode:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class OrNode:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Until:
    interval: TemporalInterval
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Since:
    interval: TemporalInterval
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    interval: TemporalInterval
    child: "Formula"


@dataclass(frozen=True)
class Dia:
    interval: TemporalInterval
    child: "Formula"


@dataclass(frozen=True)
class Next:
    child: "Formula"


@dataclass(frozen=True)
class Prev:
    child: "Formula"


Formula = Union[
    Leaf, RewrittenLeaf, TrueNode, FalseNode, Not, AndNode, OrNode, Until, Since, Box, Dia, Next, Prev
]

TEMPORAL_NODES = (Until, Since, Box, Dia, Next, Prev)
UNARY_NODES = (Not, Box, Dia, Next, Prev)
BINARY_NODES = (AndNode, OrNode, Until, Since)


@dataclass(frozen=True)
class MTNCQ:
    head: Tuple[Var, ...]
    formula: Formula
    location: Optional[SourceLocation] = field(default=None, compare=False)

    @property
    def is_temporal(self) -> bool:
        return any(isinstance(node, TEMPORAL_NODES) for node in walk(self.formula))

    @property
    def leaves(self) -> List[Union[Leaf, RewrittenLeaf]]:
        return [node for node in walk(self.formula) if isinstance(node, (Leaf, RewrittenLeaf))]

    @property
    def is_single_leaf(self) -> bool:
        return isinstance(self.formula, (Leaf, RewrittenLeaf))


def children(node: Formula) -> Tuple[Formula, ...]:
    if isinstance(node, UNARY_NODES):
        return (node.child,)
    if isinstance(node, BINARY_NODES):
        return (node.left, node.right)
    return ()


def walk(node: Formula) -> Iterator[Formula]:
    yield node
    for child in children(node):
        yield from walk(child)


def rebuild(node: Formula, new_children: Tuple[Formula, ...]) -> Formula:
    if isinstance(node, Not):
        return Not(new_children[0])
    if isinstance(node, (Box, Dia)):
        return type(node)(node.interval, new_children[0])
    if isinstance(node, (Next, Prev)):
        return type(node)(new_children[0])
    if isinstance(node, (AndNode, OrNode)):
        return type(node)(new_children[0], new_children[1])
    if isinstance(node, (Until, Since)):
        return type(node)(node.interval, new_children[0], new_children[1])
    return node


def map_leaves(node: Formula, fn: Callable[[Union[Leaf, RewrittenLeaf]], Formula]) -> Formula:
    if isinstance(node, (Leaf, RewrittenLeaf)):
        return fn(node)
    return rebuild(node, tuple(map_leaves(child, fn) for child in children(node)))


def temporal_depth(node: Formula) -> int:
    below = max((temporal_depth(child) for child in children(node)), default=0)
    return below + (1 if isinstance(node, TEMPORAL_NODES) else 0)


def expand_derived(node: Formula) -> Formula:
    """
    Replace Box, Dia, Next and Prev by their definitions over U and S:
    Dia_I φ = (⊤ S_{-(I∩(-∞,0])} φ) ∨ (⊤ U_{I∩[0,∞)} φ), Box_I φ = ¬Dia_I ¬φ,
    Next φ = ⊤ U_[1,1] φ, Prev φ = ⊤ S_[1,1] φ.
    """
    node = rebuild(node, tuple(expand_derived(child) for child in children(node)))
    if isinstance(node, Next):
        return Until(TemporalInterval(1, 1), TrueNode(), node.child)
    if isinstance(node, Prev):
        return Since(TemporalInterval(1, 1), TrueNode(), node.child)
    if isinstance(node, Dia):
        return _expand_dia(node.interval, node.child)
    if isinstance(node, Box):
        return Not(_expand_dia(node.interval, Not(node.child)))
    return node


def _expand_dia(interval: TemporalInterval, child: Formula) -> Formula:
    disjuncts: List[Formula] = []
    if interval.lo <= 0:
        # I ∩ (-∞,0] = [lo, min(hi,0)], mirrored onto ℕ
        past = TemporalInterval(-min(interval.hi, 0), -interval.lo)
        disjuncts.append(Since(past, TrueNode(), child))
    if interval.hi >= 0:
        future = TemporalInterval(max(interval.lo, 0), interval.hi)
        disjuncts.append(Until(future, TrueNode(), child))
    if len(disjuncts) == 1:
        return disjuncts[0]
    return OrNode(disjuncts[0], disjuncts[1])


def render_formula(node: Formula) -> str:
    if isinstance(node, Leaf):
        return "{" + render_ncq(node.query).split(":= {", 1)[1]
    if isinstance(node, RewrittenLeaf):
        return f"<{len(node.disjuncts)} rewritings of {render_formula(Leaf(node.query))}>"
    if isinstance(node, TrueNode):
        return "TRUE"
    if isinstance(node, FalseNode):
        return "FALSE"
    if isinstance(node, Not):
        return f"NOT {_wrap(node.child)}"
    if isinstance(node, AndNode):
        return f"{_wrap(node.left)} AND {_wrap(node.right)}"
    if isinstance(node, OrNode):
        return f"{_wrap(node.left)} OR {_wrap(node.right)}"
    if isinstance(node, Until):
        return f"{_wrap(node.left)} U{node.interval} {_wrap(node.right)}"
    if isinstance(node, Since):
        return f"{_wrap(node.left)} S{node.interval} {_wrap(node.right)}"
    if isinstance(node, Box):
        return f"BOX{node.interval} {_wrap(node.child)}"
    if isinstance(node, Dia):
        return f"DIA{node.interval} {_wrap(node.child)}"
    if isinstance(node, Next):
        return f"NEXT {_wrap(node.child)}"
    if isinstance(node, Prev):
        return f"PREV {_wrap(node.child)}"
    raise TypeError(f"unknown formula node {node!r}")


def _wrap(node: Formula) -> str:
    text = render_formula(node)
    if isinstance(node, (Leaf, RewrittenLeaf, TrueNode, FalseNode)):
        return text
    return f"({text})"


def render_mtncq(query: MTNCQ, name: str = "q") -> str:
    head = ",".join(str(v) for v in query.head)
    return f"{name}({head}) := {render_formula(query.formula)}"


def leaf_head(head: Tuple[Term, ...], query: FilteredQuery) -> Tuple[Term, ...]:
    """Answer variables of a leaf: the query head variables that occur in it, in head order."""
    occurring = query.variables
    return tuple(v for v in head if v in occurring)
