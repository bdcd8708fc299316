from typing import Optional

import click

from app.cli.options import data_option, format_option, kb_option, query_option
from app.services.kb_service import KBService
from app.services.mtncq_service import COMPARATORS, MtncqService
from app.services.oracle_service import OracleService
from app.services.query_eval_service import QueryEvalService
from app.services.query_parser_service import QueryParserService
from app.services.serialization_service import write_answers


@click.command("answer")
@kb_option
@data_option
@query_option
@click.option("--engine", type=click.Choice(["rewrite", "oracle"]), default="rewrite", show_default=True)
@format_option
@click.option("--only-tem", is_flag=True, help="Keep only time points that occur in the data")
@click.option("--oracle-depth", type=click.IntRange(min=0), default=None, help="Expansion depth of the oracle")
@click.option("--window", type=click.IntRange(min=0), default=None, help="Oracle window beyond the data's time points")
@click.option("--comparator", type=click.Choice(COMPARATORS), default="integer", show_default=True)
def answer(
    kb_path: str,
    data_path: str,
    query_path: str,
    engine: str,
    fmt: str,
    only_tem: bool,
    oracle_depth: Optional[int],
    window: Optional[int],
    comparator: str,
):
    """Minimal-world answers of a query; temporal answers come as time intervals."""
    service = KBService.load(kb_path, data_path)
    service.check_consistency()
    kb, table = service.normalized, service.table
    query = QueryParserService().parse_file(query_path)

    if engine == "oracle":
        result = OracleService(kb, table, depth=oracle_depth).answer(query, window)
    elif kb.is_temporal:
        result = MtncqService(kb, table, comparator=comparator).answer_intervals(query)
    else:
        result = QueryEvalService(kb, table).answer(query)
    if only_tem and result.temporal:
        result = result.restrict_to_points(kb.tem)
    click.echo(write_answers(result, fmt), nl=False)
