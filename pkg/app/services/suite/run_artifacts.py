import logging
from pathlib import Path
from typing import Any, Dict, Optional

from app.core.config import settings
from app.core.logging_config import engine_log, get_logs_dir
from app.services.suite.serialization import canonical_json

_RUN_DIR_CACHE: Dict[str, Path] = {}


def artifact_dir(suite_run_id: str) -> Path:
    cached = _RUN_DIR_CACHE.get(suite_run_id)
    if cached is not None:
        cached.mkdir(parents=True, exist_ok=True)
        return cached
    run_dir = get_logs_dir().parent / "json" / f"suite_{suite_run_id}"
    run_dir.mkdir(parents=True, exist_ok=True)
    _RUN_DIR_CACHE[suite_run_id] = run_dir
    return run_dir


def _write(suite_run_id: Optional[str], filename: str, payload: Any) -> Optional[Path]:
    if not settings.suite_artifacts_enabled or not suite_run_id:
        return None
    try:
        path = artifact_dir(suite_run_id) / filename
        path.write_text(canonical_json(payload) + "\n", encoding="utf-8")
        return path
    except Exception as exc:  # pragma: no cover - artifacts must not break a run
        engine_log(f"Failed to write {filename} artifact: {exc}", logging.WARNING)
        return None


def write_run_metadata(suite_run_id: Optional[str], metadata: Dict[str, Any]) -> Optional[Path]:
    return _write(suite_run_id, "run_metadata.json", metadata)


def write_report(suite_run_id: Optional[str], report: Dict[str, Any]) -> Optional[Path]:
    return _write(suite_run_id, "report.json", report)
