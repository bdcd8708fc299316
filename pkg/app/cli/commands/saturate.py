import click

from app.cli.options import data_option, kb_option
from app.core.exceptions import KBValidationError
from app.services.kb_service import KBService
from app.services.serialization_service import dump_json, saturation_dump
from app.services.temporal_saturation_service import TemporalSaturationService, representatives


@click.command("saturate")
@kb_option
@data_option
def saturate(kb_path: str, data_path: str):
    """Dump the entailed temporal assertions as intervals, with the representative time points."""
    service = KBService.load(kb_path, data_path)
    kb = service.normalized
    if not kb.is_temporal:
        raise KBValidationError(f"{kb.source} has no time-stamped data to saturate")
    extensions = TemporalSaturationService(kb, service.table).saturate()
    click.echo(dump_json(saturation_dump(extensions, representatives(kb.tem))))
