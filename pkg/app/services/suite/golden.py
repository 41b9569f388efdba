import json
from pathlib import Path
from typing import Any, Dict, Optional

from app.core.config import settings
from app.core.errors import InputError

PACKAGED_GOLDEN = Path(__file__).parent / "golden.json"
PROVENANCE_TAGS = ("PAPER", "DERIVED", "TRIVIAL")


def golden_path(override: Optional[str] = None) -> Path:
    chosen = (override or settings.suite_golden_path or "").strip()
    return Path(chosen) if chosen else PACKAGED_GOLDEN


def load_golden(path: Path) -> Dict[str, Dict[str, Any]]:
    """name -> {"provenance": tag, "value": wire value}"""
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise InputError(f"golden file {path} not found") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"golden file {path} is not valid JSON: {exc}") from exc
    cases = raw.get("cases") if isinstance(raw, dict) else None
    if not isinstance(cases, dict):
        raise InputError(f"golden file {path} has no 'cases' object")
    for name, entry in cases.items():
        if not isinstance(entry, dict) or "value" not in entry:
            raise InputError(f"golden case {name!r} has no value")
        if entry.get("provenance") not in PROVENANCE_TAGS:
            raise InputError(f"golden case {name!r} needs a provenance tag in {PROVENANCE_TAGS}")
    return cases
