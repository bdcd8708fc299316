import click

from app.cli.options import kb_option
from app.models.concepts import FRESH_PREFIX
from app.services.kb_service import KBService


@click.command("classify")
@kb_option
def classify(kb_path: str):
    """Print the entailed subsumptions between concept names, one `A SUB B` per line."""
    service = KBService.load(kb_path)
    for sub, sup in service.table.pairs():
        if sub.startswith(FRESH_PREFIX) or sup.startswith(FRESH_PREFIX):
            continue
        click.echo(f"{sub} SUB {sup}")
