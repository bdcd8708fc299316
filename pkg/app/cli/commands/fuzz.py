from typing import Optional

import click

from app.core.config import settings
from app.services.fuzz_service import FuzzService


@click.command("fuzz")
@click.option("--seeds", type=click.IntRange(min=1), default=None, help="Number of trials (default FUZZ_SEEDS)")
@click.option("--base-seed", type=int, default=None, help="First seed (default FUZZ_BASE_SEED)")
@click.option("--temporal", is_flag=True, help="Temporal instances and MTNCQs")
@click.option("--repro-dir", type=click.Path(file_okay=False), default=None, help="Where mismatches are written")
def fuzz(seeds: Optional[int], base_seed: Optional[int], temporal: bool, repro_dir: Optional[str]):
    """Compare the rewriting pipeline with the oracle on seeded random instances."""
    service = FuzzService(temporal=temporal, repro_dir=repro_dir)
    report = service.run(
        seeds or settings.FUZZ_SEEDS,
        settings.FUZZ_BASE_SEED if base_seed is None else base_seed,
    )
    click.echo(report.model_dump_json())
