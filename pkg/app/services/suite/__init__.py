from app.services.suite.cases import SuiteCase, build_cases
from app.services.suite.golden import golden_path, load_golden
from app.services.suite.presets import preset, preset_names
from app.services.suite.runner import paper_suite, run_suite
from app.services.suite.serialization import canonical_json, diff_paths, digest, to_wire

__all__ = [
    "SuiteCase",
    "build_cases",
    "golden_path",
    "load_golden",
    "preset",
    "preset_names",
    "paper_suite",
    "run_suite",
    "canonical_json",
    "diff_paths",
    "digest",
    "to_wire",
]
