"""
Dold-Puppe derived power functors.

The normalized complex of F(Gamma(C)) is built directly on nondegenerate
monomials: a monomial of level n (a product of Gamma basis vectors) is
degenerate exactly when some j in {1..n} is a jump of none of its factors, so
N_n has a basis of the monomials whose jump sets cover {1..n}, with
d = sum (-1)^i F(d_i) followed by dropping degenerate monomials. N_n = 0 once
n > r * hi(C).

AntiSym^r is not levelwise free over Z. It is the cokernel of the inclusion
K -> T^r of a free subfunctor of the tensor power, so LAntiSym^r is computed
as cone(N K -> N T).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Any, Optional

from app.core.errors import CutoffError, NonConnectiveError
from app.core.logging_config import engine_log
from app.core.metrics import observe_derived_power
from app.services.complexes import ChainComplex, ChainMap, cone
from app.services.dold_kan.power_functors import (
    PowerFunctorKind,
    image_of_monomial,
    stable_sort_sign,
)
from app.services.dold_kan.simplicial import (
    GammaLevel,
    apply_functor,
    dk_gamma,
    gamma_face_images,
    gamma_level,
    normalize,
)
from app.services.filtered.graded import GradedComplex
from app.services.linalg import Matrix, RingSpec


def _check_input(c: ChainComplex, degree_cutoff: int) -> None:
    if degree_cutoff < 0:
        raise CutoffError("degree cutoff must be nonnegative")
    if not c.is_connective:
        raise NonConnectiveError(
            f"derived power functors need connective input, lowest degree is {c.lo}"
        )


def _plan(c: ChainComplex, r: int, degree_cutoff: int) -> tuple[int, Optional[int]]:
    """(top level to build, truncation flag)."""
    full = r * c.hi
    top = min(degree_cutoff + 1, full)
    return top, (degree_cutoff if full > degree_cutoff + 1 else None)


def _nondegenerate(level: GammaLevel, r: int, hi: int, ordered: bool, strict: bool) -> list[tuple]:
    n = level.n
    full = (1 << n) - 1
    masks = [mask for mask, _ in level.elements]
    out: list[tuple] = []

    def rec(start: int, slots: int, union: int, prefix: tuple) -> None:
        if slots == 0:
            if union == full:
                out.append(prefix)
            return
        if bin(full & ~union).count("1") > slots * hi:
            return
        for e in range(start, len(masks)):
            rec(e + 1 if strict else e, slots - 1, union | masks[e], prefix + (e,))

    rec(0, r, 0, ())
    if ordered:
        seqs = set()
        for mono in out:
            seqs.update(permutations(mono))
        return sorted(seqs)
    return out


@dataclass
class _MonomialComplex:
    """Normalized F(Gamma C) levels: monomials and column images of d."""

    levels: list[GammaLevel]
    monomials: list[list[tuple]]
    index: list[dict[tuple, int]]
    columns: dict[int, list[dict[int, Any]]]  # n -> per monomial {row: coeff}


def _monomial_complex(
    c: ChainComplex, functor: str, r: int, top: int
) -> _MonomialComplex:
    ring = c.ring
    hi = max(c.hi, 1)
    levels = [gamma_level(c, n) for n in range(top + 1)]
    ordered = functor == "tensor"
    strict = functor == "ext"
    monomials = [_nondegenerate(lv, r, hi, ordered, strict) for lv in levels]
    index = [{m: k for k, m in enumerate(ms)} for ms in monomials]
    columns: dict[int, list[dict[int, Any]]] = {}
    for n in range(1, top + 1):
        if not monomials[n] or not monomials[n - 1]:
            continue
        faces = [gamma_face_images(c, levels[n], levels[n - 1], i) for i in range(n + 1)]
        cols = []
        for mono in monomials[n]:
            acc: dict[int, Any] = {}
            for i, images in enumerate(faces):
                sign = -1 if i % 2 else 1
                for key, coeff in image_of_monomial(ring, functor, mono, images).items():
                    row = index[n - 1].get(key)
                    if row is None:
                        continue  # degenerate
                    acc[row] = acc.get(row, 0) + sign * coeff
            cols.append({k: ring.reduce(v) for k, v in acc.items() if ring.reduce(v) != 0})
        columns[n] = cols
    return _MonomialComplex(levels, monomials, index, columns)


def _to_complex(ring: RingSpec, mc: _MonomialComplex, truncated: Optional[int]) -> ChainComplex:
    ranks = {n: len(ms) for n, ms in enumerate(mc.monomials)}
    diffs = {}
    for n, cols in mc.columns.items():
        diffs[n] = Matrix.from_sparse(
            ring,
            ranks[n - 1],
            ranks[n],
            ((row, j, v) for j, col in enumerate(cols) for row, v in col.items()),
        )
    return ChainComplex(ring, ranks, diffs, truncated)


def _antisym_complex(c: ChainComplex, r: int, top: int, truncated: Optional[int]) -> ChainComplex:
    ring = c.ring
    mt = _monomial_complex(c, "tensor", r, top)
    t_complex = _to_complex(ring, mt, None)
    half = None if ring.kind == "Z" else ring.inverse(2)

    # K basis per level: (vector over T monomials) for each non-sorted sequence,
    # plus 2 * sorted sequence when the multiset has a repeat
    k_vectors: list[list[dict[int, Any]]] = []
    k_lookup: list[dict[tuple, int]] = []
    for n, seqs in enumerate(mt.monomials):
        vectors, lookup = [], {}
        for s in seqs:
            t = tuple(sorted(s))
            if s != t:
                lookup[("swap", s)] = len(vectors)
                vectors.append({mt.index[n][s]: ring.one, mt.index[n][t]: ring.neg(stable_sort_sign(s))})
            elif len(set(s)) < len(s):
                lookup[("double", s)] = len(vectors)
                vectors.append({mt.index[n][s]: ring.reduce(2)})
        k_vectors.append(vectors)
        k_lookup.append(lookup)

    def coordinates(n: int, vec: dict[int, Any]) -> dict[int, Any]:
        seqs = mt.monomials[n]
        residual: dict[tuple, Any] = {}
        out: dict[int, Any] = {}
        for pos, coeff in vec.items():
            s = seqs[pos]
            t = tuple(sorted(s))
            if s != t:
                out[k_lookup[n][("swap", s)]] = coeff
                residual[t] = residual.get(t, 0) + coeff * stable_sort_sign(s)
            else:
                residual[t] = residual.get(t, 0) + coeff
        for t, value in residual.items():
            value = ring.reduce(value)
            if value == 0:
                continue
            key = ("double", t)
            if key not in k_lookup[n]:
                raise ArithmeticError(f"vector leaves the relation module at {t}")
            if half is None:
                if value % 2:
                    raise ArithmeticError(f"odd coefficient on repeated tuple {t}")
                out[k_lookup[n][key]] = value // 2
            else:
                out[k_lookup[n][key]] = ring.mul(value, half)
        return {k: v for k, v in out.items() if v != 0}

    k_ranks = {n: len(v) for n, v in enumerate(k_vectors)}
    k_diffs = {}
    for n in range(1, top + 1):
        if not k_vectors[n] or not k_vectors[n - 1]:
            continue
        cols = mt.columns.get(n, [])
        items = []
        for j, vec in enumerate(k_vectors[n]):
            image: dict[int, Any] = {}
            for pos, coeff in vec.items():
                for row, v in cols[pos].items():
                    image[row] = image.get(row, 0) + coeff * v
            image = {row: ring.reduce(v) for row, v in image.items() if ring.reduce(v) != 0}
            for row, v in coordinates(n - 1, image).items():
                items.append((row, j, v))
        k_diffs[n] = Matrix.from_sparse(ring, k_ranks[n - 1], k_ranks[n], items)
    k_complex = ChainComplex(ring, k_ranks, k_diffs)
    inclusion = {
        n: Matrix.from_sparse(
            ring,
            t_complex.rank(n),
            k_ranks[n],
            ((row, j, v) for j, vec in enumerate(vecs) for row, v in vec.items()),
        )
        for n, vecs in enumerate(k_vectors)
    }
    result = cone(ChainMap(k_complex, t_complex, inclusion))
    return result.with_truncation(truncated)


def derived_power(kind: PowerFunctorKind, c: ChainComplex, degree_cutoff: int) -> ChainComplex:
    """
    L F^r(c) for connective c, exact in degrees <= degree_cutoff.

    The result is a free complex; when normalized levels above
    degree_cutoff + 1 exist they are not built and the result carries
    ``truncated_above = degree_cutoff``.
    """
    _check_input(c, degree_cutoff)
    ring, r = c.ring, kind.weight
    if r == 0:
        return ChainComplex.concentrated(ring, 0)
    if c.is_zero:
        return ChainComplex.zero(ring)
    top, truncated = _plan(c, r, degree_cutoff)
    functor = kind.kind
    if functor == "antisym" and ring.characteristic == 2:
        functor = "sym"
    if functor == "antisym":
        result = _antisym_complex(c, r, top, truncated)
    else:
        result = _to_complex(ring, _monomial_complex(c, functor, r, top), truncated)
    observe_derived_power(kind.kind, top)
    engine_log(
        f"L{kind.display} of {c!r} through degree {degree_cutoff}: ranks {dict(result.ranks)}",
        logging.DEBUG,
    )
    return result


def derived_power_simplicial(
    kind: PowerFunctorKind, c: ChainComplex, degree_cutoff: int
) -> ChainComplex:
    """The same derived functor through dk_gamma, levelwise F and normalize."""
    _check_input(c, degree_cutoff)
    if kind.weight == 0:
        return ChainComplex.concentrated(c.ring, 0)
    level_max = max(degree_cutoff + 1, 1)
    s = apply_functor(kind, dk_gamma(c, level_max))
    return normalize(s, degree_cutoff)


def lsym_total(c: ChainComplex, weight_cutoff: int, degree_cutoff: int) -> GradedComplex:
    """Weights 0..weight_cutoff of LSym(c) = sum over w of LSym^w(c)."""
    _check_input(c, degree_cutoff)
    pieces = {
        w: derived_power(PowerFunctorKind("sym", w), c, degree_cutoff)
        for w in range(weight_cutoff + 1)
    }
    return GradedComplex(c.ring, pieces)
