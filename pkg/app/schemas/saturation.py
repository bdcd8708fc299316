from typing import Dict, List, Union

from pydantic import BaseModel, Field

Bound = Union[int, str]


class RoleExtension(BaseModel):
    role: str
    subject: str
    object: str
    intervals: List[List[Bound]]


class SaturationDump(BaseModel):
    individuals: Dict[str, Dict[str, List[List[Bound]]]] = Field(
        default_factory=dict, description="individual -> concept -> intervals"
    )
    roles: List[RoleExtension] = Field(default_factory=list)
    representatives: List[int] = Field(default_factory=list)
