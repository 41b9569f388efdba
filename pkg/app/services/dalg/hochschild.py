"""
Hochschild homology with its HKR filtration.

Polynomial rings: R (x)_{R(x)R} K with K the Koszul resolution of R over
R (x) R, d(e_k) = x_k (x) 1 - 1 (x) x_k. Read by polynomial weight, weight
of x^alpha e_I is |alpha| + |I|; the HKR weight of e_I is |I|.

One-variable hypersurfaces R = k[x]/(f), finite over k: the 2-periodic
complex R <-0- R <-f'- R <-0- R <-f'- ..., HKR weight i on degrees 2i-1 and
2i, so that gr^i = [R --f'--> R] in degrees [2i, 2i-1] = LΛ^i L[i].
"""
from __future__ import annotations

import logging
from typing import Optional, Sequence

import sympy

from app.core.config import settings
from app.core.errors import InputError, UnsupportedPresentationError
from app.core.logging_config import engine_log
from app.services.complexes import ChainComplex
from app.services.dalg.cotangent import form_basis
from app.services.dalg.finite_algebra import FiniteAlgebra
from app.services.dalg.hodge import default_poly_weights
from app.services.dalg.presentation import AlgebraPresentation
from app.services.filtered import FilteredStub, WeightedComplex
from app.services.linalg import Matrix


def _koszul_hochschild(p: AlgebraPresentation, poly_weights: Sequence[int], top: int) -> WeightedComplex:
    ring, n = p.ring, len(p.variables)
    left = p.symbols
    right = tuple(sympy.Symbol(f"{v}_right") for v in p.variables)
    down = dict(zip(right, left))
    top = min(top, n)
    bases = {deg: [b for w in poly_weights for b in form_basis(n, deg, w)] for deg in range(top + 1)}
    diffs = {}
    for deg in range(1, top + 1):
        index = {b: k for k, b in enumerate(bases[deg - 1])}
        items = []
        for col, (alpha, wedge) in enumerate(bases[deg]):
            mono = sympy.Mul(*(x**a for x, a in zip(left, alpha)))
            for t, k in enumerate(wedge):
                rest = wedge[:t] + wedge[t + 1:]
                coefficient = sympy.expand(((left[k] - right[k]) * mono).subs(down))
                if coefficient == 0:
                    continue
                for exps, c in sympy.Poly(coefficient, *left).terms():
                    items.append((index[(tuple(exps), rest)], col, (-1) ** t * int(c)))
        diffs[deg] = Matrix.from_sparse(ring, len(bases[deg - 1]), len(bases[deg]), items)
    c = ChainComplex(ring, {d: len(b) for d, b in bases.items()}, diffs)
    return WeightedComplex(c, {d: (d,) * r for d, r in c.ranks.items()})


def _periodic_hochschild(p: AlgebraPresentation, top: int) -> WeightedComplex:
    alg = FiniteAlgebra.from_presentation(p)
    (x,), (f,) = p.symbols, p.relations
    derivative = alg.matrix_of(sympy.diff(f, x))
    ring, dim = alg.ring, alg.dim
    ranks = {d: dim for d in range(top + 1)}
    diffs = {d: derivative if d % 2 == 0 else Matrix.zeros(ring, dim, dim) for d in range(1, top + 1)}
    c = ChainComplex(ring, ranks, diffs)
    return WeightedComplex(c, {d: ((d + 1) // 2,) * dim for d in ranks})


def hochschild_complex(
    p: AlgebraPresentation,
    N: int,
    degree_cutoff: Optional[int] = None,
    poly_weights: Optional[Sequence[int]] = None,
) -> WeightedComplex:
    """A levelwise-free model of HH(R/k) with HKR weights, exact through HKR weight N-1."""
    if N < 1:
        raise InputError("a stub needs N >= 1")
    degree_cutoff = settings.default_degree_cutoff if degree_cutoff is None else degree_cutoff
    if p.is_polynomial_ring:
        if not p.variables:
            raise UnsupportedPresentationError("HH of the base ring itself is the base ring")
        return _koszul_hochschild(p, poly_weights or default_poly_weights(), degree_cutoff + 1)
    if len(p.variables) == 1 and len(p.relations) == 1:
        return _periodic_hochschild(p, min(2 * N - 2, degree_cutoff + 1))
    raise UnsupportedPresentationError(
        f"Hochschild model for {p.describe()}: polynomial rings and one-variable hypersurfaces only"
    )


def hochschild_stub(
    p: AlgebraPresentation,
    N: int,
    degree_cutoff: Optional[int] = None,
    poly_weights: Optional[Sequence[int]] = None,
) -> FilteredStub:
    """HH(R/k) with the HKR filtration, modulo F^N."""
    p.require_regularity("smooth", "regseq")
    weighted = hochschild_complex(p, N, degree_cutoff, poly_weights)
    stub = weighted.to_stub(N)
    cutoff = settings.default_degree_cutoff if degree_cutoff is None else degree_cutoff
    if weighted.complex.hi > cutoff:
        stub = stub.with_truncation(cutoff)
    engine_log(f"HKR stub of {p.describe()}, N={N}: level ranks {[dict(c.ranks) for c in stub.levels]}", logging.INFO)
    return stub


def hkr_graded_ranks(n: int, N: int) -> list[int]:
    """Free ranks of Omega^i over k[x_1..x_n] for i < N, the expected HKR pieces."""
    return [len(form_basis(n, i, i)) for i in range(N)]
