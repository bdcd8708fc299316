"""
Assertion data from CSV files with the header `kind,predicate,subject,object,time`.
"""
from pathlib import Path
from typing import List, Union

import pandas as pd
from pydantic import ValidationError

from app.core.exceptions import ParseError, SourceLocation
from app.core.logging import get_logger
from app.models.assertions import Assertion, ConceptAssertion, RoleAssertion
from app.models.concepts import Name
from app.schemas.assertion_row import AssertionKind, AssertionRow
from app.utils.logger import log_stage_event

logger = get_logger("services.csv_ingest")

CSV_COLUMNS = ["kind", "predicate", "subject", "object", "time"]


class CsvIngestService:
    """Read assertion rows and validate them one by one."""

    def __init__(self, source: str = "<data>"):
        self.source = source

    def ingest(self, path: Union[str, Path]) -> List[Assertion]:
        path = Path(path)
        self.source = str(path)
        try:
            df = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
        except pd.errors.EmptyDataError:
            raise ParseError("data file is empty; expected the header " + ",".join(CSV_COLUMNS),
                             SourceLocation(self.source, 1, 1))
        except pd.errors.ParserError as exc:
            raise ParseError(f"malformed CSV: {exc}", SourceLocation(self.source, 1, 1)) from exc
        return self.from_frame(df)

    def from_frame(self, df: pd.DataFrame) -> List[Assertion]:
        # Column names are matched case-insensitively
        df = df.rename(columns=lambda c: str(c).strip().lower())
        missing = [c for c in CSV_COLUMNS if c not in df.columns]
        if missing:
            raise ParseError(
                f"data file must contain the columns {', '.join(CSV_COLUMNS)}; missing {', '.join(missing)}",
                SourceLocation(self.source, 1, 1),
            )

        assertions: List[Assertion] = []
        for index, row in df.iterrows():
            # header is line 1
            location = SourceLocation(self.source, int(index) + 2, 1)
            try:
                parsed = AssertionRow(**{c: row[c] for c in CSV_COLUMNS})
            except ValidationError as exc:
                message = "; ".join(err["msg"] for err in exc.errors())
                raise ParseError(f"invalid row: {message}", location) from exc
            assertions.append(self._assertion(parsed, location))

        log_stage_event("ingested", self.source, assertions=len(assertions))
        return assertions

    @staticmethod
    def _assertion(row: AssertionRow, location: SourceLocation) -> Assertion:
        if row.kind == AssertionKind.CONCEPT:
            return ConceptAssertion(Name(row.predicate), row.subject, row.time, location)
        return RoleAssertion(row.predicate, row.subject, row.object, row.time, location)


def ingest_csv(path: Union[str, Path]) -> List[Assertion]:
    return CsvIngestService().ingest(path)
