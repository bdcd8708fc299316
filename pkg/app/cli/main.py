"""
The `mwq` command group.
"""
import click

from app.cli.commands import answer, check, classify, comparator, expand, fuzz, rewrite, saturate
from app.core.config import settings
from app.core.exceptions import EXIT_USAGE, handle_exception
from app.core.logging import get_logger, setup_logging

logger = get_logger("cli")


class MwqGroup(click.Group):
    """Maps domain exceptions escaping a command to their exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            exc.exit_code = EXIT_USAGE
            raise
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except Exception as exc:
            ctx.exit(handle_exception(exc))


@click.group(cls=MwqGroup)
@click.version_option(settings.VERSION, prog_name=settings.PROJECT_NAME)
def cli():
    """Minimal-world query answering over ELH-bot and temporal knowledge bases."""
    setup_logging()


cli.add_command(check.check)
cli.add_command(classify.classify)
cli.add_command(saturate.saturate)
cli.add_command(rewrite.rewrite)
cli.add_command(answer.answer)
cli.add_command(expand.expand)
cli.add_command(fuzz.fuzz)
cli.add_command(comparator.comparator)
