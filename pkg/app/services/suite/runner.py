"""
Runs the golden cases. Each case is computed in a worker thread; at most
``settings.suite_parallelism`` run at once (0 means one after another).
Results come back ordered by case name whatever the completion order.
"""
import asyncio
import logging
import uuid
from datetime import datetime, timezone
from time import perf_counter
from typing import Iterable, Optional

from app.core.config import settings
from app.core.logging_config import engine_log, suite_run_logging
from app.core.metrics import observe_suite_case, observe_suite_run
from app.schemas.suite import SuiteCaseResult, SuiteReport
from app.services.suite.cases import SuiteCase, build_cases
from app.services.suite.golden import golden_path, load_golden
from app.services.suite.run_artifacts import write_report, write_run_metadata
from app.services.suite.serialization import diff_paths, digest, to_wire


def _evaluate(case: SuiteCase, golden: dict) -> SuiteCaseResult:
    entry = golden.get(case.name)
    provenance = (entry or {}).get("provenance", case.provenance)
    started = perf_counter()
    try:
        computed = to_wire(case.compute())
    except Exception as exc:
        elapsed = perf_counter() - started
        engine_log(f"case {case.name} raised {type(exc).__name__}: {exc}", logging.ERROR)
        return SuiteCaseResult(
            name=case.name,
            group=case.group,
            provenance=provenance,
            status="error",
            runtime_seconds=elapsed,
            digest="",
            expected=(entry or {}).get("value"),
            error=f"{type(exc).__name__}: {exc}",
        )
    elapsed = perf_counter() - started
    if entry is None:
        status, diff = "fail", ["no golden value for this case"]
    else:
        diff = diff_paths(entry["value"], computed)
        status = "pass" if not diff else "fail"
    level = logging.INFO if status == "pass" else logging.WARNING
    engine_log(f"case {case.name} [{provenance}] {status} in {elapsed:.2f}s", level)
    return SuiteCaseResult(
        name=case.name,
        group=case.group,
        provenance=provenance,
        status=status,
        runtime_seconds=elapsed,
        digest=digest(computed),
        computed=computed,
        expected=(entry or {}).get("value"),
        diff=diff or None,
    )


async def run_suite(
    golden_override: Optional[str] = None,
    only: Optional[Iterable[str]] = None,
    cases: Optional[list[SuiteCase]] = None,
) -> SuiteReport:
    path = golden_path(golden_override)
    golden = load_golden(path)
    selected = cases if cases is not None else build_cases()
    if only:
        wanted = set(only)
        selected = [c for c in selected if c.name in wanted]

    run_id = uuid.uuid4().hex[:10]
    with suite_run_logging(run_id):
        limit = settings.suite_parallelism
        engine_log(f"Starting suite with {len(selected)} cases, parallelism={limit or 'serial'}")
        write_run_metadata(
            run_id,
            {
                "run_id": run_id,
                "created_at": datetime.now(timezone.utc).isoformat(),
                "golden_path": str(path),
                "cases": sorted(c.name for c in selected),
                "parallelism": limit,
            },
        )
        semaphore = asyncio.Semaphore(limit or 1)

        async def _run(case: SuiteCase) -> SuiteCaseResult:
            async with semaphore:
                result = await asyncio.to_thread(_evaluate, case, golden)
            observe_suite_case(case.group, result.status, result.runtime_seconds)
            return result

        results = await asyncio.gather(*[_run(c) for c in selected])
        report = SuiteReport(
            run_id=run_id,
            golden_path=str(path),
            cases=sorted(results, key=lambda r: r.name),
        )
        observe_suite_run("pass" if report.ok else "fail")
        write_report(run_id, {"summary": report.summary(), **report.model_dump()})
        engine_log(f"Suite finished: {report.passed}/{len(report.cases)} passed")
        if report.failed:
            engine_log(f"Failed cases: {report.failed}", logging.WARNING)
        return report


def paper_suite(golden_override: Optional[str] = None) -> SuiteReport:
    return asyncio.run(run_suite(golden_override))
