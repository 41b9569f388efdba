"""
The filtered circle: chains on S^1 = BZ with the (u-1)-adic filtration.

Modulo weight N the group ring Z[u^{+-1}] is Z[t]/(t^N) with t = u - 1 of
weight 1. Its normalized bar complex against the augmentation t -> 0 has
basis [t^{k_1} | ... | t^{k_n}] (k_i >= 1) in degree n and weight sum(k),
with d = sum_{i=1}^{n-1} (-1)^i (merge slots i and i+1).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator

from app.core.errors import InputError
from app.core.logging_config import engine_log
from app.services.complexes import ChainComplex, homology
from app.services.filtered import (
    FilteredStub,
    GradedComplex,
    WeightedComplex,
    associated_graded,
    dual_graded,
    shear,
)
from app.services.linalg import Matrix, RingSpec, ZZ


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def bar_complex(N: int, ring: RingSpec = ZZ) -> WeightedComplex:
    """Bar complex of Z[t]/(t^N), basis tuples of total weight < N."""
    bases = {
        n: [c for w in range(n, N) for c in _compositions(w, n)] for n in range(N)
    }
    bases = {n: b for n, b in bases.items() if b}
    diffs = {}
    for n, basis in bases.items():
        if n - 1 not in bases or n < 2:
            continue
        index = {c: k for k, c in enumerate(bases[n - 1])}
        items = []
        for col, c in enumerate(basis):
            for i in range(1, n):
                merged = c[: i - 1] + (c[i - 1] + c[i],) + c[i + 1:]
                items.append((index[merged], col, (-1) ** i))
        diffs[n] = Matrix.from_sparse(ring, len(bases[n - 1]), len(basis), items)
    c = ChainComplex(ring, {n: len(b) for n, b in bases.items()}, diffs)
    return WeightedComplex(c, {n: tuple(sum(t) for t in b) for n, b in bases.items()})


def filtered_circle_stub(N: int, ring: RingSpec = ZZ) -> FilteredStub:
    if N < 2:
        raise InputError("the filtered circle needs N >= 2")
    stub = bar_complex(N, ring).to_stub(N)
    engine_log(f"filtered circle modulo weight {N}: level ranks {dict(stub.levels[0].ranks)}", logging.DEBUG)
    return stub


@dataclass(frozen=True)
class DMinusDual:
    """
    Z(0) + Z[1](-1) with basis 1 and d (for the generator ∂). The coproduct
    makes ∂ primitive and the counit kills it.
    """

    ring: RingSpec = ZZ

    basis = ("1", "d")

    def graded(self) -> GradedComplex:
        return GradedComplex(
            self.ring,
            {0: ChainComplex.concentrated(self.ring, 0), -1: ChainComplex.concentrated(self.ring, 1)},
        )

    @staticmethod
    def coproduct(element: str) -> dict[tuple[str, str], int]:
        if element == "1":
            return {("1", "1"): 1}
        return {("d", "1"): 1, ("1", "d"): 1}

    @staticmethod
    def counit(element: str) -> int:
        return 1 if element == "1" else 0

    def counit_holds(self) -> bool:
        """(eps (x) id) Delta = id = (id (x) eps) Delta on the basis."""
        for b in self.basis:
            left, right = {}, {}
            for (x, y), c in self.coproduct(b).items():
                left[y] = left.get(y, 0) + self.counit(x) * c
                right[x] = right.get(x, 0) + self.counit(y) * c
            expected = {b: 1}
            if {k: v for k, v in left.items() if v} != expected:
                return False
            if {k: v for k, v in right.items() if v} != expected:
                return False
        return True

    def coassociative(self) -> bool:
        for b in self.basis:
            lhs, rhs = {}, {}
            for (x, y), c in self.coproduct(b).items():
                for (x1, x2), c1 in self.coproduct(x).items():
                    key = (x1, x2, y)
                    lhs[key] = lhs.get(key, 0) + c * c1
                for (y1, y2), c2 in self.coproduct(y).items():
                    key = (x, y1, y2)
                    rhs[key] = rhs.get(key, 0) + c * c2
            if lhs != rhs:
                return False
        return True

    def weights_respected(self) -> bool:
        weight = {"1": 0, "d": -1}
        return all(
            weight[x] + weight[y] == weight[b]
            for b in self.basis
            for (x, y) in self.coproduct(b)
        )


def d_minus(ring: RingSpec = ZZ) -> GradedComplex:
    """Z(0) + Z[-1](1), the linear dual of DMinusDual."""
    return dual_graded(DMinusDual(ring).graded())


@dataclass(frozen=True)
class CircleComparison:
    N: int
    total_homology: dict[int, str]
    graded_homology: dict[int, dict[int, str]]
    sheared_dual: dict[int, dict[int, str]]
    expected: dict[int, dict[int, str]]

    @property
    def matches(self) -> dict[int, bool]:
        weights = set(self.sheared_dual) | set(self.expected)
        return {w: self.sheared_dual.get(w, {}) == self.expected.get(w, {}) for w in sorted(weights)}

    @property
    def passed(self) -> bool:
        return all(self.matches.values())

    def to_payload(self) -> dict:
        return {
            "N": self.N,
            "total_homology": {str(k): v for k, v in self.total_homology.items()},
            "graded_homology": {
                str(w): {str(k): v for k, v in t.items()} for w, t in self.graded_homology.items()
            },
            "matches": {str(w): ok for w, ok in self.matches.items()},
            "passed": self.passed,
        }


def circle_comparison(N: int) -> CircleComparison:
    """gr of the filtered circle, weight-negated dual, sheared, against DMinusDual."""
    stub = filtered_circle_stub(N)
    gr = associated_graded(stub)
    sheared = shear(dual_graded(gr), -1)
    return CircleComparison(
        N,
        homology(stub.levels[0]).labels(),
        gr.homology_labels(),
        {w: labels for w, labels in sheared.homology_labels().items() if labels},
        DMinusDual().graded().homology_labels(),
    )
