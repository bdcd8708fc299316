"""
Concept expressions of ELH⊥ and its temporal extension.
"""
from dataclasses import dataclass
from typing import FrozenSet, Union

from app.models.diamond import DiamondOp

TOP = "top"
BOT = "bot"
RESERVED_CONCEPTS = frozenset({TOP, BOT})
FRESH_PREFIX = "_N"


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class And:
    left: "Concept"
    right: "Concept"


@dataclass(frozen=True)
class Exists:
    role: str
    filler: "Concept"


@dataclass(frozen=True)
class Diam:
    op: DiamondOp
    filler: "Concept"


Concept = Union[Name, Top, Bot, And, Exists, Diam]


def is_atomic(concept: Concept) -> bool:
    return isinstance(concept, (Name, Top, Bot))


def atomic_name(concept: Concept) -> str:
    """Symbol of an atomic concept (top/bot included)."""
    if isinstance(concept, Name):
        return concept.name
    if isinstance(concept, Top):
        return TOP
    if isinstance(concept, Bot):
        return BOT
    raise ValueError(f"{render_concept(concept)} is not atomic")


def from_symbol(symbol: str) -> Concept:
    if symbol == TOP:
        return Top()
    if symbol == BOT:
        return Bot()
    return Name(symbol)


def has_diamond(concept: Concept) -> bool:
    if isinstance(concept, Diam):
        return True
    if isinstance(concept, And):
        return has_diamond(concept.left) or has_diamond(concept.right)
    if isinstance(concept, Exists):
        return has_diamond(concept.filler)
    return False


def concept_names(concept: Concept) -> FrozenSet[str]:
    if isinstance(concept, Name):
        return frozenset({concept.name})
    if isinstance(concept, And):
        return concept_names(concept.left) | concept_names(concept.right)
    if isinstance(concept, (Exists, Diam)):
        return concept_names(concept.filler)
    return frozenset()


def role_names(concept: Concept) -> FrozenSet[str]:
    if isinstance(concept, And):
        return role_names(concept.left) | role_names(concept.right)
    if isinstance(concept, Exists):
        return frozenset({concept.role}) | role_names(concept.filler)
    if isinstance(concept, Diam):
        return role_names(concept.filler)
    return frozenset()


def conjuncts(concept: Concept) -> list:
    if isinstance(concept, And):
        return conjuncts(concept.left) + conjuncts(concept.right)
    return [concept]


def render_concept(concept: Concept, nested: bool = False) -> str:
    """Render in the knowledge base grammar."""
    if isinstance(concept, Name):
        return concept.name
    if isinstance(concept, Top):
        return TOP
    if isinstance(concept, Bot):
        return BOT
    if isinstance(concept, And):
        text = f"{render_concept(concept.left, True)} AND {render_concept(concept.right, True)}"
        return f"({text})" if nested else text
    if isinstance(concept, Exists):
        return f"some {concept.role} . {render_concept(concept.filler, True)}"
    if isinstance(concept, Diam):
        return f"{concept.op.keyword()} {render_concept(concept.filler, True)}"
    raise TypeError(f"unknown concept {concept!r}")
