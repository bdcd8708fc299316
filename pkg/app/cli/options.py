"""
Options shared by several commands.
"""
import click

from app.services.serialization_service import FORMATS

existing_file = click.Path(exists=True, dir_okay=False, readable=True)

kb_option = click.option("--kb", "kb_path", required=True, type=existing_file, help="Knowledge base file")
data_option = click.option("--data", "data_path", type=existing_file, default=None, help="Assertion CSV file")
query_option = click.option("--query", "query_path", required=True, type=existing_file, help="Query file")
format_option = click.option(
    "--format", "fmt", type=click.Choice(FORMATS), default="json", show_default=True, help="Answer output format"
)
