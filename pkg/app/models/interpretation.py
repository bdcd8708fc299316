"""
Finite interpretations: the named part of the minimal canonical model and its
depth-bounded anonymous expansions.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from app.models.concepts import BOT, TOP

Edge = Tuple[str, str]


@dataclass(frozen=True)
class FiniteInterpretation:
    domain: Tuple[str, ...]
    named: FrozenSet[str]
    concepts: Mapping[str, FrozenSet[str]]
    roles: Mapping[str, FrozenSet[Edge]]
    depth: Mapping[str, int] = field(default_factory=dict)
    parent: Mapping[str, str] = field(default_factory=dict)
    _types: Dict[str, FrozenSet[str]] = field(default_factory=dict, init=False, repr=False, compare=False)
    _succ: Dict[Tuple[str, str], FrozenSet[str]] = field(default_factory=dict, init=False, repr=False, compare=False)
    _pred: Dict[Tuple[str, str], FrozenSet[str]] = field(default_factory=dict, init=False, repr=False, compare=False)
    _between: Dict[Edge, FrozenSet[str]] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        types: Dict[str, Set[str]] = defaultdict(set)
        for concept, members in self.concepts.items():
            for d in members:
                types[d].add(concept)
        succ: Dict[Tuple[str, str], Set[str]] = defaultdict(set)
        pred: Dict[Tuple[str, str], Set[str]] = defaultdict(set)
        between: Dict[Edge, Set[str]] = defaultdict(set)
        for role, edges in self.roles.items():
            for d, e in edges:
                succ[(role, d)].add(e)
                pred[(role, e)].add(d)
                between[(d, e)].add(role)
        self._types.update({d: frozenset(ts | {TOP}) for d, ts in types.items()})
        self._succ.update({k: frozenset(v) for k, v in succ.items()})
        self._pred.update({k: frozenset(v) for k, v in pred.items()})
        self._between.update({k: frozenset(v) for k, v in between.items()})

    @classmethod
    def build(
        cls,
        named: Iterable[str],
        concepts: Mapping[str, Iterable[str]],
        roles: Mapping[str, Iterable[Edge]],
        anonymous: Iterable[str] = (),
        depth: Optional[Mapping[str, int]] = None,
        parent: Optional[Mapping[str, str]] = None,
    ) -> "FiniteInterpretation":
        named = sorted(set(named))
        anonymous = [d for d in anonymous if d not in named]
        return cls(
            domain=tuple(named + anonymous),
            named=frozenset(named),
            concepts={c: frozenset(m) for c, m in concepts.items() if m and c != TOP},
            roles={r: frozenset(e) for r, e in roles.items() if e},
            depth=dict(depth or {d: 0 for d in named}),
            parent=dict(parent or {}),
        )

    @classmethod
    def empty(cls) -> "FiniteInterpretation":
        return cls.build((), {}, {})

    def __len__(self) -> int:
        return len(self.domain)

    def extension(self, concept: str) -> FrozenSet[str]:
        if concept == TOP:
            return frozenset(self.domain)
        return self.concepts.get(concept, frozenset())

    def has(self, concept: str, element: str) -> bool:
        if concept == TOP:
            return element in self._types or element in self.domain
        if concept == BOT:
            return False
        return concept in self._types.get(element, ())

    def type_of(self, element: str) -> FrozenSet[str]:
        return self._types.get(element, frozenset({TOP}))

    def successors(self, role: str, element: str) -> FrozenSet[str]:
        return self._succ.get((role, element), frozenset())

    def predecessors(self, role: str, element: str) -> FrozenSet[str]:
        return self._pred.get((role, element), frozenset())

    def holds(self, role: str, subject: str, obj: str) -> bool:
        return role in self._between.get((subject, obj), ())

    def roles_between(self, subject: str, obj: str) -> FrozenSet[str]:
        return self._between.get((subject, obj), frozenset())

    def out_edges(self, element: str) -> List[Tuple[str, str]]:
        """(role, target) pairs leaving an element."""
        return sorted((r, e) for (r, d), targets in self._succ.items() if d == element for e in targets)

    def edge_pairs(self) -> Set[Edge]:
        return set(self._between)

    def anonymous(self) -> List[str]:
        return [d for d in self.domain if d not in self.named]
