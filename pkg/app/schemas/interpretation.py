from typing import List, Optional

from pydantic import BaseModel, Field


class ElementDump(BaseModel):
    id: str
    named: bool
    depth: int
    parent: Optional[str] = None
    concepts: List[str] = Field(default_factory=list)


class EdgeDump(BaseModel):
    role: str
    from_: str = Field(..., alias="from")
    to: str

    model_config = {"populate_by_name": True}


class InterpretationDump(BaseModel):
    elements: List[ElementDump] = Field(default_factory=list)
    edges: List[EdgeDump] = Field(default_factory=list)
