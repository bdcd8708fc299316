import click

from app.cli.options import kb_option, query_option
from app.services.kb_service import KBService
from app.services.mtncq_service import MtncqService
from app.services.query_parser_service import QueryParserService
from app.services.rewriter_service import RewriterService
from app.services.serialization_service import rewritings_to_json, rewritings_to_text


@click.command("rewrite")
@kb_option
@query_option
@click.option("--emit", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--temporal", is_flag=True, help="Print the temporal skeleton and the constant N")
def rewrite(kb_path: str, query_path: str, emit: str, temporal: bool):
    """Print all rewritings of an NCQ, or the skeleton of a query with temporal or Boolean structure."""
    service = KBService.load(kb_path)
    kb, table = service.normalized, service.table
    query = QueryParserService().parse_file(query_path)
    if temporal or not query.is_single_leaf:
        click.echo(MtncqService(kb, table).skeleton(query))
        return
    rewritings = RewriterService.for_kb(kb, table).all_rewritings(query.leaves[0].query)
    if emit == "json":
        click.echo(rewritings_to_json(rewritings))
    else:
        click.echo(rewritings_to_text(rewritings), nl=False)
