from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from app.core.errors import InvalidComplexError
from app.services.complexes import ChainComplex, ChainMap
from app.services.filtered.stubs import FilteredStub
from app.services.linalg import Matrix


@dataclass(frozen=True)
class WeightedComplex:
    """
    A free complex with a filtration weight on every basis vector.

    The differential never lowers weight, so for each s the span of the basis
    vectors of weight >= s is a subcomplex and the filtration splits
    degreewise.
    """

    complex: ChainComplex
    weights: Mapping[int, tuple[int, ...]]

    def __post_init__(self) -> None:
        c = self.complex
        weights = {int(n): tuple(int(w) for w in ws) for n, ws in self.weights.items()}
        for n, r in c.ranks.items():
            if len(weights.get(n, ())) != r:
                raise InvalidComplexError(f"degree {n} has {r} basis vectors but weights for {len(weights.get(n, ()))}")
        for n, m in c.differentials.items():
            for i, j, _ in m.nonzero_items():
                if weights[n - 1][i] < weights[n][j]:
                    raise InvalidComplexError(
                        f"d_{n} lowers weight from {weights[n][j]} to {weights[n - 1][i]}"
                    )
        object.__setattr__(self, "weights", {n: weights[n] for n in c.ranks})

    def window(self, lo: int, hi: int) -> tuple[ChainComplex, dict[int, list[int]]]:
        """F^lo / F^hi as a complex on the basis vectors of weight in [lo, hi)."""
        keep = {
            n: [k for k, w in enumerate(ws) if lo <= w < hi] for n, ws in self.weights.items()
        }
        ranks = {n: len(idx) for n, idx in keep.items()}
        diffs = {
            n: m.submatrix(keep.get(n - 1, []), keep[n])
            for n, m in self.complex.differentials.items()
            if n in keep and n - 1 in keep
        }
        return ChainComplex(self.complex.ring, ranks, diffs), keep

    def to_stub(self, N: int) -> FilteredStub:
        ring = self.complex.ring
        windows = [self.window(s, N) for s in range(N)]
        transitions = []
        for s in range(N - 1):
            (upper, up_idx), (lower, low_idx) = windows[s + 1], windows[s]
            comps = {}
            for n, idx in up_idx.items():
                pos = {k: t for t, k in enumerate(low_idx[n])}
                comps[n] = Matrix.from_sparse(
                    ring, len(low_idx[n]), len(idx), ((pos[k], t, 1) for t, k in enumerate(idx))
                )
            transitions.append(ChainMap(upper, lower, comps))
        return FilteredStub(N, tuple(c for c, _ in windows), tuple(transitions))


def uniform_weights(c: ChainComplex, weight_of_degree: Mapping[int, int]) -> WeightedComplex:
    """Every basis vector of degree n gets weight_of_degree[n]."""
    return WeightedComplex(c, {n: (weight_of_degree[n],) * r for n, r in c.ranks.items()})
