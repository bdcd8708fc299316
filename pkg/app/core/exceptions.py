from dataclasses import dataclass
from typing import Any, Optional

import click
from pydantic import ValidationError

from app.core.config import settings
from app.core.logging import get_logger

logger = get_logger("core.exceptions")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2
EXIT_REFUSED = 3
EXIT_INTERNAL = 4


@dataclass(frozen=True)
class SourceLocation:
    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class MwqException(Exception):
    """Base class for all failures the command line reports with an exit code."""

    exit_code = EXIT_INTERNAL

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ParseError(MwqException):
    exit_code = EXIT_USAGE

    def __init__(self, detail: str, location: SourceLocation):
        super().__init__(detail)
        self.location = location

    def __str__(self) -> str:
        return f"{self.location}: {self.detail}"


class KBValidationError(MwqException):
    exit_code = EXIT_USAGE

    def __init__(self, detail: str, location: Optional[SourceLocation] = None):
        super().__init__(detail)
        self.location = location

    def __str__(self) -> str:
        if self.location is not None:
            return f"{self.location}: {self.detail}"
        return self.detail


class InconsistencyError(MwqException):
    exit_code = EXIT_INCONSISTENT

    def __init__(self, detail: str, witness: Any = None):
        super().__init__(detail)
        self.witness = witness

    def __str__(self) -> str:
        if self.witness is not None:
            return f"{self.detail} (witness: {self.witness})"
        return self.detail


class RefusalError(MwqException):
    exit_code = EXIT_REFUSED


class InvariantViolation(MwqException):
    exit_code = EXIT_INTERNAL


def _emit(message: str) -> None:
    color = settings.MWQ_COLOR == "auto" and click.get_text_stream("stderr").isatty()
    click.secho(message, err=True, fg="red" if color else None)


def mwq_exception_handler(exc: MwqException) -> int:
    logger.error(f"{type(exc).__name__}: {exc}")
    _emit(f"error: {exc}")
    return exc.exit_code


def validation_exception_handler(exc: ValidationError) -> int:
    logger.error(f"Validation Error: {exc.errors()}")
    _emit(f"error: invalid input: {exc}")
    return EXIT_USAGE


def unhandled_exception_handler(exc: Exception) -> int:
    logger.error(f"Unhandled Exception: {str(exc)}", exc_info=True)
    _emit(f"internal error: {exc}")
    return EXIT_INTERNAL


def handle_exception(exc: Exception) -> int:
    """Map an exception escaping a command to its exit code."""
    if isinstance(exc, MwqException):
        return mwq_exception_handler(exc)
    if isinstance(exc, ValidationError):
        return validation_exception_handler(exc)
    return unhandled_exception_handler(exc)
