"""
Prometheus collectors for suite runs and engine work.

The engine's collectors live in their own registry so that ``metrics`` can
print them without the default process/python collectors.
"""
from typing import Tuple

from prometheus_client import (
    CONTENT_TYPE_LATEST,
    CollectorRegistry,
    Counter,
    Histogram,
    generate_latest,
)

ENGINE_REGISTRY = CollectorRegistry(auto_describe=True)


def _label(value: object) -> str:
    cleaned = str(value if value is not None else "").strip().lower()
    return cleaned[:64] or "unknown"


SUITE_CASES_TOTAL = Counter(
    "derham_suite_cases_total",
    "Golden suite cases by group and status",
    labelnames=("group", "status"),
    registry=ENGINE_REGISTRY,
)

SUITE_CASE_DURATION_SECONDS = Histogram(
    "derham_suite_case_duration_seconds",
    "Wall time of one golden suite case",
    labelnames=("group",),
    buckets=(0.01, 0.05, 0.1, 0.25, 0.5, 1, 2, 5, 10, 30, 60, 120),
    registry=ENGINE_REGISTRY,
)

SUITE_RUNS_TOTAL = Counter(
    "derham_suite_runs_total",
    "Golden suite runs by outcome",
    labelnames=("status",),
    registry=ENGINE_REGISTRY,
)

HOMOLOGY_COMPUTATIONS_TOTAL = Counter(
    "derham_homology_computations_total",
    "Homology tables computed, by base ring",
    labelnames=("ring",),
    registry=ENGINE_REGISTRY,
)

MATRIX_ELIMINATIONS_TOTAL = Counter(
    "derham_matrix_eliminations_total",
    "Invariant factor eliminations, by base ring",
    labelnames=("ring",),
    registry=ENGINE_REGISTRY,
)

DERIVED_POWER_TOP_DEGREE = Histogram(
    "derham_derived_power_top_degree",
    "Top normalized degree built for one derived power functor",
    labelnames=("kind",),
    buckets=(0, 1, 2, 3, 4, 6, 8, 12, 16, 24),
    registry=ENGINE_REGISTRY,
)


def observe_suite_case(group: str, status: str, duration_seconds: float) -> None:
    group_label = _label(group)
    SUITE_CASES_TOTAL.labels(group=group_label, status=_label(status)).inc()
    SUITE_CASE_DURATION_SECONDS.labels(group=group_label).observe(max(duration_seconds, 0.0))


def observe_suite_run(status: str) -> None:
    SUITE_RUNS_TOTAL.labels(status=_label(status)).inc()


def observe_homology(ring: object) -> None:
    HOMOLOGY_COMPUTATIONS_TOTAL.labels(ring=_label(ring)).inc()


def observe_matrix_elimination(ring: object) -> None:
    MATRIX_ELIMINATIONS_TOTAL.labels(ring=_label(ring)).inc()


def observe_derived_power(kind: str, top_degree: int) -> None:
    DERIVED_POWER_TOP_DEGREE.labels(kind=_label(kind)).observe(max(top_degree, 0))


def render_engine_metrics() -> Tuple[bytes, str]:
    """Text exposition of the derham_* collectors only."""
    return generate_latest(ENGINE_REGISTRY), CONTENT_TYPE_LATEST
