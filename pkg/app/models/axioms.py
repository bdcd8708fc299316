"""
Raw TBox axioms as parsed, and the normal-form shapes the reasoners work on.
"""
from dataclasses import dataclass, field
from typing import Optional, Union

from app.core.exceptions import SourceLocation
from app.models.concepts import BOT, TOP, Concept, render_concept
from app.models.diamond import DiamondOp


@dataclass(frozen=True)
class ConceptInclusion:
    lhs: Concept
    rhs: Concept
    location: Optional[SourceLocation] = field(default=None, compare=False)

    def render(self) -> str:
        return f"{render_concept(self.lhs)} SUB {render_concept(self.rhs)}"


@dataclass(frozen=True)
class RoleInclusion:
    sub: str
    sup: str
    location: Optional[SourceLocation] = field(default=None, compare=False)

    def render(self) -> str:
        return f"role {self.sub} SUB {self.sup}"


RawAxiom = Union[ConceptInclusion, RoleInclusion]


# Normal forms. Left-hand names range over concept names and top,
# right-hand names over concept names and bot.

@dataclass(frozen=True, order=True)
class ConjCI:
    left: str
    right: str
    sup: str

    def render(self) -> str:
        if self.right == TOP:
            return f"{self.left} SUB {self.sup}"
        if self.left == TOP:
            return f"{self.right} SUB {self.sup}"
        return f"{self.left} AND {self.right} SUB {self.sup}"


@dataclass(frozen=True, order=True)
class DiamCI:
    op: DiamondOp = field(compare=False)
    sub: str
    sup: str
    op_key: str = field(default="", repr=False)

    def __post_init__(self):
        object.__setattr__(self, "op_key", self.op.keyword())

    def render(self) -> str:
        return f"{self.op.keyword()} {self.sub} SUB {self.sup}"


@dataclass(frozen=True, order=True)
class ExistsRHS:
    sub: str
    role: str
    filler: str

    def render(self) -> str:
        return f"{self.sub} SUB some {self.role} . {self.filler}"


@dataclass(frozen=True, order=True)
class ExistsLHS:
    role: str
    filler: str
    sup: str

    def render(self) -> str:
        return f"some {self.role} . {self.filler} SUB {self.sup}"


@dataclass(frozen=True, order=True)
class RoleCI:
    sub: str
    sup: str

    def render(self) -> str:
        return f"role {self.sub} SUB {self.sup}"


NormalAxiom = Union[ConjCI, DiamCI, ExistsRHS, ExistsLHS, RoleCI]


def axiom_concepts(axiom: NormalAxiom) -> set:
    """Concept symbols used by a normal axiom, top and bot excluded."""
    if isinstance(axiom, ConjCI):
        names = {axiom.left, axiom.right, axiom.sup}
    elif isinstance(axiom, DiamCI):
        names = {axiom.sub, axiom.sup}
    elif isinstance(axiom, ExistsRHS):
        names = {axiom.sub, axiom.filler}
    elif isinstance(axiom, ExistsLHS):
        names = {axiom.filler, axiom.sup}
    else:
        names = set()
    return names - {TOP, BOT}


def axiom_roles(axiom: NormalAxiom) -> set:
    if isinstance(axiom, (ExistsRHS, ExistsLHS)):
        return {axiom.role}
    if isinstance(axiom, RoleCI):
        return {axiom.sub, axiom.sup}
    return set()
