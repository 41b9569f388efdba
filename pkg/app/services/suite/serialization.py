"""
Canonical JSON: sorted keys, integers as decimal strings, no whitespace
variance. Two runs on the same input produce the same bytes.
"""
import hashlib
import json
from fractions import Fraction
from typing import Any


def to_wire(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(key): to_wire(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_wire(item) for item in value]
    if hasattr(value, "to_payload"):
        return to_wire(value.to_payload())
    if hasattr(value, "model_dump"):
        return to_wire(value.model_dump())
    # sympy integers and the like
    try:
        return str(int(value)) if int(value) == value else str(value)
    except (TypeError, ValueError):
        return str(value)


def canonical_json(value: Any, indent: int | None = 2) -> str:
    return json.dumps(to_wire(value), sort_keys=True, ensure_ascii=False, indent=indent)


def digest(value: Any) -> str:
    compact = json.dumps(to_wire(value), sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(compact.encode("utf-8")).hexdigest()


def diff_paths(expected: Any, computed: Any, path: str = "$") -> list[str]:
    """Paths at which two wire values differ, with both sides shown."""
    if isinstance(expected, dict) and isinstance(computed, dict):
        out: list[str] = []
        for key in sorted(set(expected) | set(computed)):
            if key not in computed:
                out.append(f"{path}.{key}: expected {json.dumps(expected[key], sort_keys=True)}, missing")
            elif key not in expected:
                out.append(f"{path}.{key}: unexpected {json.dumps(computed[key], sort_keys=True)}")
            else:
                out.extend(diff_paths(expected[key], computed[key], f"{path}.{key}"))
        return out
    if isinstance(expected, list) and isinstance(computed, list) and len(expected) == len(computed):
        out = []
        for k, (e, c) in enumerate(zip(expected, computed)):
            out.extend(diff_paths(e, c, f"{path}[{k}]"))
        return out
    if expected == computed:
        return []
    return [
        f"{path}: expected {json.dumps(expected, sort_keys=True)}, "
        f"computed {json.dumps(computed, sort_keys=True)}"
    ]
