"""
Seeded equivalence trials between the rewriting pipeline and the oracle.
"""
from pathlib import Path
from typing import Optional, Tuple

from app.core.config import settings
from app.core.exceptions import InvariantViolation, RefusalError
from app.core.logging import get_logger
from app.models.answer_set import AnswerSet
from app.schemas.fuzz import FuzzReport, ReproMeta
from app.services.csv_ingest_service import CSV_COLUMNS
from app.services.instance_generator_service import Instance, random_instance
from app.services.kb_service import KBService
from app.services.mtncq_service import MtncqService, compute_n
from app.services.oracle_service import OracleService, default_window, locality_depth
from app.services.query_eval_service import QueryEvalService
from app.services.serialization_service import write_answers
from app.utils.logger import log_stage_event, log_trial

logger = get_logger("services.fuzz")

N_STABILITY_SHIFT = 5


class FuzzService:
    """Run trials over consecutive seeds; the first disagreement is written out as a repro bundle."""

    def __init__(self, temporal: bool = False, repro_dir: Optional[str] = None):
        self.temporal = temporal
        self.mode = "temporal" if temporal else "atemporal"
        self.repro_dir = Path(repro_dir or settings.REPRO_DIR)

    def run(self, seeds: int, base_seed: int = 0) -> FuzzReport:
        report = FuzzReport(mode=self.mode)
        for seed in range(base_seed, base_seed + seeds):
            report.trials += 1
            try:
                self.trial(seed)
            except RefusalError as exc:
                log_trial(seed, self.mode, "refused", detail=exc.detail)
                report.refused += 1
                report.refused_seeds.append(seed)
                continue
            report.agreed += 1
        log_stage_event("fuzzed", None, **report.model_dump(exclude={"refused_seeds"}))
        return report

    def trial(self, seed: int) -> None:
        """Raise InvariantViolation on disagreement, RefusalError when the oracle declines."""
        instance = random_instance(seed, self.temporal)
        service = KBService(instance.kb)
        kb, table = service.normalized, service.table
        depth = max([settings.ORACLE_DEPTH] + [locality_depth(leaf.query) for leaf in instance.query.leaves])
        oracle = OracleService(kb, table, depth=depth)

        if not self.temporal:
            pipeline = QueryEvalService(kb, table).answer(instance.query)
            expected = oracle.answer(instance.query)
            if pipeline.tuple_set() != expected.tuple_set():
                self._mismatch(instance, "oracle", pipeline, expected, None)
            log_trial(seed, self.mode, "agree", answers=len(pipeline))
            return

        engine = MtncqService(kb, table)
        pipeline = engine.answer_intervals(instance.query)
        window = default_window(kb, instance.query)
        expected = oracle.oracle_temporal(instance.query, window)
        tem = kb.tem
        lo, hi = tem[0] - window, tem[-1] + window
        if pipeline.as_points(lo, hi) != expected.as_points(lo, hi):
            self._mismatch(instance, "oracle", pipeline, expected, (lo, hi))

        shifted = MtncqService(kb, table, n_override=compute_n(instance.query.formula) + N_STABILITY_SHIFT)
        stable = shifted.answer_intervals(instance.query)
        if stable.as_dict() != pipeline.as_dict():
            self._mismatch(instance, "n-stability", pipeline, stable, None)
        log_trial(seed, self.mode, "agree", answers=len(pipeline))

    def _mismatch(
        self,
        instance: Instance,
        check: str,
        pipeline: AnswerSet,
        expected: AnswerSet,
        window: Optional[Tuple[int, int]],
    ) -> None:
        bundle = self.write_bundle(instance, check, pipeline, expected, window)
        log_trial(instance.seed, self.mode, "mismatch", check=check, bundle=str(bundle))
        raise InvariantViolation(f"seed {instance.seed}: {check} check failed; repro bundle in {bundle}")

    def write_bundle(
        self,
        instance: Instance,
        check: str,
        pipeline: AnswerSet,
        expected: AnswerSet,
        window: Optional[Tuple[int, int]],
    ) -> Path:
        if window is not None:
            expected = expected.window(*window)
        bundle = self.repro_dir / f"seed-{instance.seed}-{self.mode}"
        bundle.mkdir(parents=True, exist_ok=True)
        (bundle / "kb.txt").write_text(instance.kb_text, encoding="utf-8")
        (bundle / "data.csv").write_text(",".join(CSV_COLUMNS) + "\n", encoding="utf-8")
        (bundle / "query.txt").write_text(instance.query_text + "\n", encoding="utf-8")
        (bundle / "expected.json").write_text(write_answers(expected), encoding="utf-8")
        meta = ReproMeta(
            seed=instance.seed,
            mode=self.mode,
            check=check,
            window=list(window) if window is not None else None,
            pipeline=write_answers(pipeline).strip(),
        )
        (bundle / "meta.json").write_text(meta.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return bundle
