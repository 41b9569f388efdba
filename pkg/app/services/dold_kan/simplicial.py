"""
Dold-Kan inverse and normalization.

Gamma(C)_n is the direct sum over monotone surjections [n] -> [k] of C_k. A
surjection is recorded by its jump set J in {1..n} (the t with
sigma(t) = sigma(t-1) + 1), stored as a bitmask with bit j-1 for j in J, so
|J| = k. Basis vectors of level n are pairs (J, b) with b a basis index of C_k.

Face d_i on (J, b):
- i = 0: if 1 in J, (J shifted down, d_C b); else (J shifted down, b)
- 0 < i < n: zero if i and i+1 are both jumps, else the merged jump set
- i = n: zero if n in J, else (J, b)

Degeneracy s_j on (J, b): jumps t <= j stay, jumps t > j move to t + 1.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Mapping

from app.core.errors import CutoffError, NonConnectiveError, PreconditionError
from app.core.logging_config import engine_log
from app.services.complexes import ChainComplex
from app.services.dold_kan.power_functors import PowerFunctorKind, power_on_free
from app.services.linalg import Matrix, RingSpec, kernel_basis, solve


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class GammaLevel:
    n: int
    elements: tuple[tuple[int, int], ...]  # (jump mask, basis index in C_k)
    index: Mapping[tuple[int, int], int] = field(compare=False)

    @property
    def rank(self) -> int:
        return len(self.elements)

    def covering(self, i: int) -> int:
        return self.elements[i][0]


def gamma_level(c: ChainComplex, n: int) -> GammaLevel:
    elements = []
    for k in sorted(c.ranks):
        if k > n:
            break
        for jumps in combinations(range(n), k):
            mask = 0
            for bit in jumps:
                mask |= 1 << bit
            for b in range(c.rank(k)):
                elements.append((mask, b))
    elements.sort(key=lambda e: (popcount(e[0]), e[0], e[1]))
    return GammaLevel(n, tuple(elements), {e: i for i, e in enumerate(elements)})


def _face_mask(mask: int, n: int, i: int) -> tuple[int, bool] | None:
    """(new mask, apply d_C) for face d_i, or None when the face kills the summand."""
    if i == 0:
        return mask >> 1, bool(mask & 1)
    if i == n:
        return (None if mask & (1 << (n - 1)) else (mask, False))
    lo_bit, hi_bit = mask & (1 << (i - 1)), mask & (1 << i)
    if lo_bit and hi_bit:
        return None
    low = mask & ((1 << (i - 1)) - 1)
    mid = (1 << (i - 1)) if (lo_bit or hi_bit) else 0
    high = (mask >> (i + 1)) << i
    return low | mid | high, False


def gamma_face_images(
    c: ChainComplex, upper: GammaLevel, lower: GammaLevel, i: int
) -> dict[int, dict[int, Any]]:
    """images[e] = {e': coeff} for the face d_i: level n -> level n-1."""
    n = upper.n
    diff_cols: dict[int, dict[int, dict[int, Any]]] = {}
    out: dict[int, dict[int, Any]] = {}
    for e, (mask, b) in enumerate(upper.elements):
        res = _face_mask(mask, n, i)
        if res is None:
            out[e] = {}
            continue
        new_mask, apply_d = res
        if not apply_d:
            out[e] = {lower.index[(new_mask, b)]: c.ring.one}
            continue
        k = popcount(mask)
        if k not in diff_cols:
            cols: dict[int, dict[int, Any]] = {}
            for r, col, v in c.d(k).nonzero_items():
                cols.setdefault(col, {})[r] = v
            diff_cols[k] = cols
        out[e] = {lower.index[(new_mask, r)]: v for r, v in diff_cols[k].get(b, {}).items()}
    return out


def _degeneracy_mask(mask: int, j: int) -> int:
    low = mask & ((1 << j) - 1)
    high = (mask >> j) << (j + 1)
    return low | high


def _images_to_matrix(ring: RingSpec, images: Mapping[int, Mapping[int, Any]], rows: int, cols: int) -> Matrix:
    return Matrix.from_sparse(
        ring, rows, cols, ((r, col, v) for col, img in images.items() for r, v in img.items())
    )


@dataclass(frozen=True)
class SimplicialModule:
    """
    Levelwise free simplicial module truncated at ``level_max``.

    faces[(n, i)] is d_i: level n -> n-1 and degeneracies[(n, j)] is
    s_j: level n -> n+1 (for n < level_max). The simplicial identities are
    verified on construction.
    """

    ring: RingSpec
    level_max: int
    ranks: Mapping[int, int]
    faces: Mapping[tuple[int, int], Matrix]
    degeneracies: Mapping[tuple[int, int], Matrix]

    def __post_init__(self) -> None:
        problem = self.identity_failure()
        if problem:
            raise PreconditionError(f"simplicial identity fails: {problem}")

    def d(self, n: int, i: int) -> Matrix:
        return self.faces[(n, i)]

    def s(self, n: int, j: int) -> Matrix:
        return self.degeneracies[(n, j)]

    def identity_failure(self) -> str | None:
        top = self.level_max
        for n in range(2, top + 1):
            for j in range(n + 1):
                for i in range(j):
                    if self.d(n - 1, i) @ self.d(n, j) != self.d(n - 1, j - 1) @ self.d(n, i):
                        return f"d_{i} d_{j} at level {n}"
        for n in range(0, top):
            ident = Matrix.identity(self.ring, self.ranks[n])
            for j in range(n + 1):
                s = self.s(n, j)
                if self.d(n + 1, j) @ s != ident or self.d(n + 1, j + 1) @ s != ident:
                    return f"d s_{j} = id at level {n}"
                for i in range(n + 2):
                    if i < j:
                        if self.d(n + 1, i) @ s != self.s(n - 1, j - 1) @ self.d(n, i):
                            return f"d_{i} s_{j} at level {n}"
                    elif i > j + 1:
                        if self.d(n + 1, i) @ s != self.s(n - 1, j) @ self.d(n, i - 1):
                            return f"d_{i} s_{j} at level {n}"
            if n + 1 < top:
                for j in range(n + 1):
                    for i in range(j + 1):
                        if self.s(n + 1, i) @ self.s(n, j) != self.s(n + 1, j + 1) @ self.s(n, i):
                            return f"s_{i} s_{j} at level {n}"
        return None


def dk_gamma(c: ChainComplex, level_max: int) -> SimplicialModule:
    """The simplicial module Gamma(c) up to level_max."""
    if not c.is_connective:
        raise NonConnectiveError(f"Dold-Kan needs a connective complex, lowest degree is {c.lo}")
    if level_max < 0:
        raise CutoffError("level_max must be nonnegative")
    levels = [gamma_level(c, n) for n in range(level_max + 1)]
    faces, degens = {}, {}
    for n in range(1, level_max + 1):
        for i in range(n + 1):
            images = gamma_face_images(c, levels[n], levels[n - 1], i)
            faces[(n, i)] = _images_to_matrix(c.ring, images, levels[n - 1].rank, levels[n].rank)
    for n in range(level_max):
        for j in range(n + 1):
            images = {
                e: {levels[n + 1].index[(_degeneracy_mask(mask, j), b)]: c.ring.one}
                for e, (mask, b) in enumerate(levels[n].elements)
            }
            degens[(n, j)] = _images_to_matrix(c.ring, images, levels[n + 1].rank, levels[n].rank)
    engine_log(
        f"Gamma levels up to {level_max}: ranks {[lv.rank for lv in levels]}", logging.DEBUG
    )
    return SimplicialModule(
        c.ring, level_max, {n: lv.rank for n, lv in enumerate(levels)}, faces, degens
    )


def normalize(s: SimplicialModule, degree_cutoff: int) -> ChainComplex:
    """
    Normalized chains N_n = ker d_1 n ... n ker d_n with differential d_0.

    Levels above degree_cutoff + 1 are not built; the result is flagged as
    truncated above degree_cutoff when levels were dropped.
    """
    if degree_cutoff < 0:
        raise CutoffError("degree cutoff must be nonnegative")
    if degree_cutoff > s.level_max:
        raise CutoffError(
            f"degree cutoff {degree_cutoff} exceeds available levels {s.level_max}"
        )
    top = min(s.level_max, degree_cutoff + 1)
    ring = s.ring
    bases: dict[int, Matrix] = {0: Matrix.identity(ring, s.ranks[0])}
    for n in range(1, top + 1):
        stacked = s.d(n, 1)
        for i in range(2, n + 1):
            stacked = stacked.vstack(s.d(n, i))
        bases[n] = kernel_basis(stacked)
    ranks = {n: b.cols for n, b in bases.items()}
    diffs = {}
    for n in range(1, top + 1):
        if bases[n].cols and bases[n - 1].cols:
            image = s.d(n, 0) @ bases[n]
            diffs[n] = solve(bases[n - 1], image)
    truncated = degree_cutoff if top < s.level_max or top > degree_cutoff else None
    return ChainComplex(ring, ranks, diffs, truncated)


def apply_functor(kind: PowerFunctorKind, s: SimplicialModule) -> SimplicialModule:
    """F applied levelwise; only functors with a free monomial basis."""
    if kind.kind == "antisym":
        raise PreconditionError("AntiSym is not levelwise free; use derived_power")
    faces = {key: power_on_free(kind, m) for key, m in s.faces.items()}
    degens = {key: power_on_free(kind, m) for key, m in s.degeneracies.items()}
    ranks = {}
    for n in range(s.level_max + 1):
        unit_matrix = Matrix.identity(s.ring, s.ranks[n])
        ranks[n] = power_on_free(kind, unit_matrix).rows
    return SimplicialModule(s.ring, s.level_max, ranks, faces, degens)
