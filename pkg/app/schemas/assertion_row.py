from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.concepts import RESERVED_CONCEPTS


class AssertionKind(str, Enum):
    CONCEPT = "concept"
    ROLE = "role"


class AssertionRow(BaseModel):
    """One row of an assertion CSV file"""
    kind: AssertionKind = Field(..., description="concept or role")
    predicate: str = Field(..., min_length=1, description="Concept or role name")
    subject: str = Field(..., min_length=1, description="Individual the assertion is about")
    object: Optional[str] = Field(None, description="Second individual, role rows only")
    time: Optional[int] = Field(None, ge=-(2 ** 63), le=2 ** 63 - 1, description="Time stamp, temporal data only")

    model_config = ConfigDict(str_strip_whitespace=True)

    @field_validator("predicate")
    @classmethod
    def unreserved_predicate(cls, v):
        if v in RESERVED_CONCEPTS:
            raise ValueError(f"'{v}' is reserved and cannot be asserted")
        return v

    @field_validator("object", mode="before")
    @classmethod
    def blank_object(cls, v):
        if isinstance(v, str) and not v.strip():
            return None
        return v

    @field_validator("time", mode="before")
    @classmethod
    def integer_time(cls, v):
        if isinstance(v, str):
            text = v.strip()
            if not text:
                return None
            digits = text[1:] if text[0] in "+-" else text
            if not digits.isdigit():
                raise ValueError(f"time '{v}' is not an integer")
            return int(text)
        return v

    @model_validator(mode="after")
    def check_arity(self):
        if self.kind == AssertionKind.CONCEPT and self.object is not None:
            raise ValueError("concept rows take no object")
        if self.kind == AssertionKind.ROLE and self.object is None:
            raise ValueError("role rows need an object")
        return self
