from typing import Optional

import click

from app.cli.options import data_option, kb_option
from app.core.exceptions import KBValidationError
from app.services.canonical_model_service import CanonicalModelService, expand_canonical
from app.services.kb_service import KBService
from app.services.serialization_service import dump_json, interpretation_dump
from app.services.temporal_saturation_service import TemporalSaturationService


@click.command("expand")
@kb_option
@data_option
@click.option("--depth", type=click.IntRange(min=0), required=True, help="Maximal depth of anonymous elements")
@click.option("--at", "time", type=int, default=None, help="Time point of the snapshot (temporal data only)")
def expand(kb_path: str, data_path: str, depth: int, time: Optional[int]):
    """Dump the canonical model expanded up to a depth."""
    service = KBService.load(kb_path, data_path)
    kb, table = service.normalized, service.table
    if kb.is_temporal:
        extensions = TemporalSaturationService(kb, table).saturate()
        named = extensions.snapshot(kb.tem[0] if time is None else time)
    elif time is not None:
        raise KBValidationError("--at needs time-stamped data")
    else:
        named = CanonicalModelService(kb, table).build_named_part()
    click.echo(dump_json(interpretation_dump(expand_canonical(named, table, depth))))
