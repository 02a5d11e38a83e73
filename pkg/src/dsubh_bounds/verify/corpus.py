from __future__ import annotations

import dataclasses
import logging
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from dsubh_bounds.config.settings import apply_overrides, settings
from dsubh_bounds.core.enums import TheoremId
from dsubh_bounds.dsubh.characteristic import CharacteristicFunctional
from dsubh_bounds.specs.loaders import load_corpus
from dsubh_bounds.specs.schemas import CorpusSpec
from dsubh_bounds.utils.errors import DomainError, GeometryError, SpecError
from dsubh_bounds.verify.cases import (
    VerificationCase,
    build_case,
    case_label,
    parse_case,
    resolver_for,
)
from dsubh_bounds.verify.records import CorpusResult, VerificationRecord, rejected, summarize
from dsubh_bounds.verify.theorems import run_case

logger = logging.getLogger(__name__)


def _raw_theorem(raw: object) -> TheoremId | None:
    value = raw.get("theorem") if isinstance(raw, dict) else None
    return TheoremId(value) if value in {t.value for t in TheoremId} else None


def _timed(
    case: VerificationCase, characteristic: CharacteristicFunctional | None
) -> list[VerificationRecord]:
    start = time.perf_counter()
    records = run_case(case, characteristic=characteristic)
    if not settings.record_timing:
        return records
    ms = (time.perf_counter() - start) * 1000.0
    return [dataclasses.replace(rec, ms=ms) for rec in records]


def _init_worker(values: dict[str, object]) -> None:
    apply_overrides(values)


def _run_all(
    cases: Sequence[VerificationCase],
    characteristic: CharacteristicFunctional | None,
    jobs: int,
) -> list[list[VerificationRecord]]:
    if jobs <= 1 or len(cases) <= 1:
        return [_timed(c, characteristic) for c in cases]

    # executor.map keeps submission order, whatever the completion order
    with ProcessPoolExecutor(
        max_workers=jobs, initializer=_init_worker, initargs=(settings.model_dump(),)
    ) as pool:
        return list(pool.map(_timed, cases, [characteristic] * len(cases)))


def run_corpus(
    corpus: CorpusSpec | str | Path,
    *,
    base_dir: str | Path | None = None,
    jobs: int | None = None,
    characteristic: CharacteristicFunctional | None = None,
) -> CorpusResult:
    """
    What it does:
    - Builds every case of a corpus and evaluates it, in corpus order.

    Why it matters:
    - This is the single entry point for the CLI and the acceptance suite.

    Behavior:
    - A case that fails to parse or build becomes a rejected record; the run goes on.
    - `jobs` > 1 evaluates cases in worker processes that inherit the current settings.
    - Sweep cases are also listed under `sweeps` by case label for plotting.
    """
    if not isinstance(corpus, CorpusSpec):
        path = Path(corpus)
        base_dir = path.parent if base_dir is None else base_dir
        corpus = load_corpus(path)
    resolver = resolver_for(corpus, base_dir if base_dir is not None else Path.cwd())
    jobs = settings.jobs if jobs is None else jobs

    # 1) Build cases; failures keep their slot as a rejected record
    slots: list[VerificationCase | VerificationRecord] = []
    for i, raw in enumerate(corpus.cases):
        label = case_label(raw, i)
        try:
            slots.append(build_case(parse_case(raw, index=i), resolver))
        except (SpecError, DomainError, GeometryError) as e:
            logger.warning("Case %s could not be built: %s", label, e)
            slots.append(rejected(label, _raw_theorem(raw), f"malformed case: {e}"))

    # 2) Evaluate
    cases = [s for s in slots if isinstance(s, VerificationCase)]
    results = iter(_run_all(cases, characteristic, jobs))

    # 3) Reassemble in corpus order
    records: list[VerificationRecord] = []
    sweeps: dict[str, tuple[VerificationRecord, ...]] = {}
    for slot in slots:
        if isinstance(slot, VerificationRecord):
            records.append(slot)
            continue
        produced = next(results)
        records.extend(produced)
        if slot.sweep is not None:
            sweeps[slot.label] = tuple(produced)

    summary = summarize(records)
    logger.info(
        "Corpus done: %d records, %d ok, %d violations, %d rejected",
        summary.total,
        summary.ok,
        summary.violations,
        summary.rejected,
    )
    return CorpusResult(
        records=tuple(records), summary=summary, seed=settings.seed, sweeps=sweeps
    )
