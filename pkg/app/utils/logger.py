"""
Utility functions for structured logging
"""
from typing import Optional
from app.core.logging import get_logger

logger = get_logger("utils.logger")


def log_stage_event(
    stage: str,
    subject: Optional[str] = None,
    **kwargs
) -> None:
    """Log a pipeline stage boundary (parsed, normalized, classified, ...) with structured data"""
    logger.info(
        f"Stage: {stage}",
        extra={
            "event_type": "stage",
            "stage": stage,
            "subject": subject,
            **kwargs
        }
    )


def log_trial(
    seed: int,
    mode: str,
    outcome: str,
    **kwargs
) -> None:
    """Log one fuzz trial with structured data"""
    level = "warning" if outcome != "agree" else "debug"
    getattr(logger, level)(
        f"Trial {seed}: {outcome}",
        extra={
            "event_type": "fuzz_trial",
            "seed": seed,
            "mode": mode,
            "outcome": outcome,
            **kwargs
        }
    )
