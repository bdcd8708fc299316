from dataclasses import dataclass, field
from typing import Optional, Union

from app.core.exceptions import SourceLocation
from app.models.concepts import Concept, Name, is_atomic, render_concept


@dataclass(frozen=True)
class ConceptAssertion:
    concept: Concept
    individual: str
    time: Optional[int] = None
    location: Optional[SourceLocation] = field(default=None, compare=False)

    @property
    def is_complex(self) -> bool:
        return not isinstance(self.concept, Name)

    @property
    def concept_name(self) -> str:
        if not isinstance(self.concept, Name):
            raise ValueError(f"assertion on complex concept {render_concept(self.concept)}")
        return self.concept.name

    def render(self) -> str:
        concept = render_concept(self.concept)
        if not is_atomic(self.concept):
            concept = f"({concept})"
        text = f"{concept}({self.individual})"
        return text if self.time is None else f"{text} @ {self.time}"


@dataclass(frozen=True)
class RoleAssertion:
    role: str
    subject: str
    object: str
    time: Optional[int] = None
    location: Optional[SourceLocation] = field(default=None, compare=False)

    def render(self) -> str:
        text = f"{self.role}({self.subject}, {self.object})"
        return text if self.time is None else f"{text} @ {self.time}"


Assertion = Union[ConceptAssertion, RoleAssertion]
