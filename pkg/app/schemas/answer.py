from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

Bound = Union[int, str]


class AnswerEntry(BaseModel):
    tuple_: List[str] = Field(..., alias="tuple", description="Individuals bound to the answer variables")
    intervals: Optional[List[List[Bound]]] = Field(
        None, description="Time points as ascending intervals; -inf/inf for unbounded ends. Absent for atemporal answers"
    )

    model_config = ConfigDict(populate_by_name=True)


class AnswerSetResponse(BaseModel):
    answers: List[AnswerEntry] = Field(default_factory=list)
