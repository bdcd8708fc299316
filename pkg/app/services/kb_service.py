"""
Loading a knowledge base and preparing it for answering: normalization,
classification and the consistency check.
"""
from pathlib import Path
from typing import Optional, Union

from app.core.exceptions import InconsistencyError
from app.core.logging import get_logger
from app.models.concepts import BOT, TOP
from app.models.knowledge_base import KnowledgeBase
from app.models.subsumption import SubsumptionTable
from app.services.canonical_model_service import CanonicalModelService
from app.services.classifier_service import classify_kb
from app.services.csv_ingest_service import CsvIngestService
from app.services.kb_parser_service import KBParserService
from app.services.normalizer_service import normalize
from app.services.temporal_saturation_service import TemporalSaturationService

logger = get_logger("services.kb")


class KBService:
    """A parsed knowledge base with its normal form and subsumption table, computed on first use."""

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        self._normalized: Optional[KnowledgeBase] = None
        self._table: Optional[SubsumptionTable] = None

    @classmethod
    def load(cls, kb_path: Union[str, Path], data_path: Optional[Union[str, Path]] = None) -> "KBService":
        kb = KBParserService().parse_file(kb_path)
        if data_path is not None:
            kb = kb.with_assertions(CsvIngestService().ingest(data_path))
        return cls(kb)

    @property
    def normalized(self) -> KnowledgeBase:
        if self._normalized is None:
            self._normalized = normalize(self.kb)
        return self._normalized

    @property
    def table(self) -> SubsumptionTable:
        if self._table is None:
            self._table = classify_kb(self.normalized)
        return self._table

    def check_consistency(self) -> None:
        """Raise InconsistencyError with a witness assertion when the knowledge base has no model."""
        kb, table = self.normalized, self.table
        if table.is_unsatisfiable(TOP):
            raise InconsistencyError(f"{kb.source} is inconsistent: top is unsatisfiable", f"{TOP} SUB {BOT}")
        if kb.is_temporal:
            TemporalSaturationService(kb, table).saturate()
        else:
            CanonicalModelService(kb, table).build_named_part()
        logger.info(f"{kb.source} is consistent")

    def consistent(self) -> bool:
        try:
            self.check_consistency()
        except InconsistencyError:
            return False
        return True


def load_kb(kb_path: Union[str, Path], data_path: Optional[Union[str, Path]] = None) -> KBService:
    return KBService.load(kb_path, data_path)
