import click

from app.cli.options import data_option, kb_option
from app.services.kb_service import KBService


@click.command("check")
@kb_option
@data_option
def check(kb_path: str, data_path: str):
    """Check consistency; exit 2 with a witness assertion when inconsistent."""
    service = KBService.load(kb_path, data_path)
    service.check_consistency()
    click.echo("consistent")
