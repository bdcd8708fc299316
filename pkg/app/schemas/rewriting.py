from typing import List, Optional

from pydantic import BaseModel, Field


class FilterDump(BaseModel):
    subject: str
    role: str
    concepts: List[str] = Field(default_factory=list)
    negated_concepts: List[str] = Field(default_factory=list)
    negated_roles: List[str] = Field(default_factory=list)
    nested: List["FilterDump"] = Field(default_factory=list)


class RewritingDump(BaseModel):
    head: List[str]
    atoms: List[str] = Field(default_factory=list)
    negated: List[str] = Field(default_factory=list)
    filters: List[FilterDump] = Field(default_factory=list)
    text: Optional[str] = None


class RewritingSetResponse(BaseModel):
    rewritings: List[RewritingDump] = Field(default_factory=list)


FilterDump.model_rebuild()
