"""
Koszul models of LSym^r and LΛ^r of a two-term complex [Q --phi--> P].

Over a commutative k-algebra S that is finite free over k, with P, Q free
S-modules:

    LSym^r(L)_j = Sym^{r-j} P (x) Λ^j Q
        d(m (x) q_1 ^ ... ^ q_j) = sum_t (-1)^(t-1) phi(q_t) m (x) ... q_t omitted ...
    LΛ^r(L)_j = Λ^{r-j} P (x) Γ^j Q
        d(w (x) gamma) = sum over q in gamma of (phi(q) ^ w) (x) gamma / q

Each S-coefficient is expanded into its k-linear multiplication block, so the
result is a free complex over k of rank dim(S) times the S-rank.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Any, Optional, Protocol, Sequence

from app.core.errors import InputError
from app.services.complexes import ChainComplex
from app.services.linalg import Matrix, RingSpec


class CoefficientAlgebra(Protocol):
    ring: RingSpec

    @property
    def dim(self) -> int: ...

    def multiplication_matrix(self, element: Sequence[Any]) -> Matrix: ...

    def is_zero(self, element: Sequence[Any]) -> bool: ...


@dataclass(frozen=True)
class BaseRingAlgebra:
    """The base ring itself, as a one-dimensional coefficient algebra."""

    ring: RingSpec

    @property
    def dim(self) -> int:
        return 1

    def multiplication_matrix(self, element: Sequence[Any]) -> Matrix:
        return Matrix.scalar(self.ring, 1, element[0])

    def is_zero(self, element: Sequence[Any]) -> bool:
        return self.ring.reduce(element[0]) == 0


@dataclass(frozen=True)
class KoszulInput:
    """phi[a][q]: coefficient of P-basis vector a in phi(Q-basis vector q)."""

    algebra: CoefficientAlgebra
    p_rank: int
    q_rank: int
    phi: tuple[tuple[tuple[Any, ...], ...], ...]

    @classmethod
    def from_matrix(cls, m: Matrix) -> "KoszulInput":
        """[Q --m--> P] over the base ring."""
        phi = tuple(tuple((m[a, q],) for q in range(m.cols)) for a in range(m.rows))
        return cls(BaseRingAlgebra(m.ring), m.rows, m.cols, phi)


def _wedge_in(a: int, w: tuple) -> Optional[tuple[int, tuple]]:
    """p_a ^ w as (sign, sorted tuple), None when a already occurs."""
    pos = bisect_right(w, a)
    if pos and w[pos - 1] == a:
        return None
    return (-1 if pos % 2 else 1), w[:pos] + (a,) + w[pos:]


def _remove_one(gamma: tuple, q: int) -> tuple:
    pos = gamma.index(q)
    return gamma[:pos] + gamma[pos + 1:]


def _assemble(
    data: KoszulInput, bases: dict[int, list[tuple]], terms_of
) -> ChainComplex:
    alg = data.algebra
    ring, dim = alg.ring, alg.dim
    index = {j: {b: k for k, b in enumerate(basis)} for j, basis in bases.items()}
    ranks = {j: len(basis) * dim for j, basis in bases.items()}
    blocks: dict[tuple, Matrix] = {}
    diffs = {}
    for j, basis in bases.items():
        if j - 1 not in bases or not basis or not bases[j - 1]:
            continue
        items = []
        for col, b in enumerate(basis):
            for sign, target, coeff in terms_of(b):
                if alg.is_zero(coeff):
                    continue
                key = tuple(coeff)
                if key not in blocks:
                    blocks[key] = alg.multiplication_matrix(coeff)
                row = index[j - 1][target]
                for i, k, v in blocks[key].nonzero_items():
                    items.append((row * dim + i, col * dim + k, sign * v))
        diffs[j] = Matrix.from_sparse(ring, ranks[j - 1], ranks[j], items)
    return ChainComplex(ring, ranks, diffs)


def koszul_sym(r: int, data: KoszulInput) -> ChainComplex:
    """LSym^r of [Q -> P] (Q in degree 1, P in degree 0)."""
    bases = {
        j: [
            (m, e)
            for e in combinations(range(data.q_rank), j)
            for m in combinations_with_replacement(range(data.p_rank), r - j)
        ]
        for j in range(0, min(r, data.q_rank) + 1)
    }

    def terms(b):
        m, e = b
        for t, q in enumerate(e):
            rest = e[:t] + e[t + 1:]
            sign = -1 if t % 2 else 1
            for a in range(data.p_rank):
                pos = bisect_right(m, a)
                yield sign, (m[:pos] + (a,) + m[pos:], rest), data.phi[a][q]

    return _assemble(data, bases, terms)


def koszul_exterior(r: int, data: KoszulInput) -> ChainComplex:
    """LΛ^r of [Q -> P] (Q in degree 1, P in degree 0)."""
    bases = {
        j: [
            (w, g)
            for g in combinations_with_replacement(range(data.q_rank), j)
            for w in combinations(range(data.p_rank), r - j)
        ]
        for j in range(0, r + 1)
        if r - j <= data.p_rank
    }
    bases = {j: b for j, b in bases.items() if b}

    def terms(b):
        w, g = b
        for q in sorted(set(g)):
            rest = _remove_one(g, q)
            for a in range(data.p_rank):
                wedged = _wedge_in(a, w)
                if wedged is None:
                    continue
                sign, w2 = wedged
                yield sign, (w2, rest), data.phi[a][q]

    return _assemble(data, bases, terms)


def koszul_power(kind: str, r: int, data: KoszulInput) -> ChainComplex:
    if r < 0:
        raise InputError("weight must be nonnegative")
    if kind == "sym":
        return koszul_sym(r, data)
    if kind == "ext":
        return koszul_exterior(r, data)
    raise InputError(f"no Koszul model for {kind!r}; use sym or ext")
