import click

from app.core.config import settings
from app.utils.bit_arithmetic import RELATIONS, emit_comparator_formula


@click.command("comparator")
@click.option("--relation", type=click.Choice(RELATIONS), required=True)
@click.option("--offset", type=int, required=True, help="The constant d in t' - t <relation> d")
@click.option("--bits", type=click.IntRange(min=1), default=None, help="Magnitude bits (default TIME_BITS)")
def comparator(relation: str, offset: int, bits: int):
    """Print the bit-level formula deciding t' - t <relation> d."""
    click.echo(emit_comparator_formula(relation, offset, bits or settings.TIME_BITS))
