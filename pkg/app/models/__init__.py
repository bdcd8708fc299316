"""
Models package - the value types shared by every stage of the pipeline.
"""

from app.models.answer_set import AnswerSet
from app.models.assertions import ConceptAssertion, RoleAssertion
from app.models.axioms import ConceptInclusion, ConjCI, DiamCI, ExistsLHS, ExistsRHS, RoleCI, RoleInclusion
from app.models.diamond import DiamondOp
from app.models.interpretation import FiniteInterpretation
from app.models.interval_set import IntervalSet
from app.models.knowledge_base import KBMode, KnowledgeBase
from app.models.mtncq import MTNCQ
from app.models.query import NCQ, Filter, FilteredQuery
from app.models.subsumption import SubsumptionTable
from app.models.temporal import TemporalExtensionMap, TemporalStructure, VirtualPoint

# Export all models for convenience
__all__ = [
    "AnswerSet",
    "ConceptAssertion",
    "RoleAssertion",
    "ConceptInclusion",
    "RoleInclusion",
    "ConjCI",
    "DiamCI",
    "ExistsRHS",
    "ExistsLHS",
    "RoleCI",
    "DiamondOp",
    "FiniteInterpretation",
    "IntervalSet",
    "KBMode",
    "KnowledgeBase",
    "MTNCQ",
    "NCQ",
    "Filter",
    "FilteredQuery",
    "SubsumptionTable",
    "TemporalExtensionMap",
    "TemporalStructure",
    "VirtualPoint",
]
