from typing import List, Optional

from pydantic import BaseModel, Field


class ReproMeta(BaseModel):
    """meta.json of a repro bundle"""
    seed: int
    mode: str = Field(..., description="atemporal or temporal")
    check: str = Field(..., description="Which comparison failed")
    window: Optional[List[int]] = Field(None, description="Compared window for temporal trials")
    pipeline: str = Field(..., description="Answers of the rewriting engine, JSON")


class FuzzReport(BaseModel):
    mode: str
    trials: int = 0
    agreed: int = 0
    refused: int = 0
    refused_seeds: List[int] = Field(default_factory=list)
