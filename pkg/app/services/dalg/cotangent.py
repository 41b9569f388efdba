"""
Kähler differentials and the two-term cotangent complex of a presentation.

For S = k[x]/(f_1..f_c) with (f) regular, L_{S/k} is [S^c --J--> S dx] in
degrees [1, 0] with J the Jacobian; the relative complex L_{S/k[x]} is S^c
in degree 1. When S is finite over k everything is realized k-linearly
through the coefficient algebra of S. Polynomial rings are handled by
polynomial weight instead: x_i and dx_i both have weight 1.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Optional, Sequence

import sympy

from app.core.errors import UnsupportedPresentationError
from app.services.complexes import ChainComplex
from app.services.dalg.finite_algebra import FiniteAlgebra
from app.services.dalg.presentation import AlgebraPresentation
from app.services.dold_kan import BaseRingAlgebra, KoszulInput, koszul_sym
from app.services.dold_kan.koszul import CoefficientAlgebra
from app.services.linalg import FgModule, Matrix, RingSpec, cokernel


def coefficient_algebra(p: AlgebraPresentation) -> CoefficientAlgebra:
    """
    S as a finite free algebra over the ring its linear algebra runs over:
    k itself, F_c for Z/(c) with c prime, or k[x]/J finite over k.
    """
    if p.variables:
        if p.is_polynomial_ring:
            raise UnsupportedPresentationError(
                f"{p.describe()} is not finite over {p.ring}; use polynomial weights"
            )
        return FiniteAlgebra.from_presentation(p)
    if not p.relations or all(r == 0 for r in p.relations):
        return BaseRingAlgebra(p.ring)
    c = p.constant_quotient()
    if p.ring.kind == "Z" and c is not None and sympy.isprime(abs(c)):
        return BaseRingAlgebra(RingSpec.prime_field(abs(c)))
    raise UnsupportedPresentationError(
        f"{p.describe()}: only quotients of Z by a prime are handled without variables"
    )


# polynomial forms


def exponents(n: int, total: int) -> list[tuple[int, ...]]:
    """Exponent vectors of length n and sum total, in a fixed order."""
    out = []
    for combo in combinations_with_replacement(range(n), total):
        e = [0] * n
        for k in combo:
            e[k] += 1
        out.append(tuple(e))
    return out


def wedge_sign(k: int, wedge: tuple[int, ...]) -> Optional[tuple[int, tuple[int, ...]]]:
    """dx_k ^ dx_wedge as (sign, sorted indices), None when k is already there."""
    pos = bisect_right(wedge, k)
    if pos and wedge[pos - 1] == k:
        return None
    return (-1 if pos % 2 else 1), wedge[:pos] + (k,) + wedge[pos:]


def form_basis(n: int, i: int, weight: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """x^alpha dx_I with |I| = i and |alpha| + i = weight."""
    if weight < i or i > n:
        return []
    return [(a, w) for w in combinations(range(n), i) for a in exponents(n, weight - i)]


def de_rham_matrix(ring: RingSpec, n: int, i: int, weight: int) -> Matrix:
    """d: Omega^i -> Omega^{i+1} on the polynomial-weight piece."""
    source = form_basis(n, i, weight)
    target = form_basis(n, i + 1, weight)
    index = {b: r for r, b in enumerate(target)}
    items = []
    for col, (alpha, wedge) in enumerate(source):
        for k in range(n):
            if alpha[k] == 0:
                continue
            wedged = wedge_sign(k, wedge)
            if wedged is None:
                continue
            sign, new_wedge = wedged
            lowered = alpha[:k] + (alpha[k] - 1,) + alpha[k + 1:]
            items.append((index[(lowered, new_wedge)], col, sign * alpha[k]))
    return Matrix.from_sparse(ring, len(target), len(source), items)


# Kähler differentials


@dataclass(frozen=True)
class KahlerModule:
    """Omega^1 presented over S: generators dx_i, one relation row df_j per relation."""

    presentation: AlgebraPresentation
    generators: tuple[str, ...]
    relations: tuple[tuple[sympy.Expr, ...], ...]

    def over_base(self) -> FgModule:
        """Omega^1 as a module over the linear-algebra ring of S."""
        p = self.presentation
        alg = coefficient_algebra(p)
        if not self.generators:
            return FgModule.zero(alg.ring)
        n, dim = len(self.generators), alg.dim
        columns = []
        for row in self.relations:
            blocks = [alg.matrix_of(entry) for entry in row]
            for k in range(dim):
                col = []
                for block in blocks:
                    col.extend(block.column(k))
                columns.append(col)
        return cokernel(Matrix.from_columns(alg.ring, columns, n * dim))

    @property
    def label(self) -> str:
        if not self.generators:
            return "0"
        gens = ", ".join(self.generators)
        if not self.relations:
            return f"free on {gens}"
        rels = "; ".join(
            " + ".join(f"({e})*{g}" for e, g in zip(row, self.generators) if e != 0) or "0"
            for row in self.relations
        )
        return f"<{gens}> / ({rels})"


def kahler(p: AlgebraPresentation) -> KahlerModule:
    gens = tuple(f"d{v}" for v in p.variables)
    return KahlerModule(p, gens, tuple(tuple(row) for row in p.jacobian()))


# cotangent complex


@dataclass(frozen=True)
class CotangentComplex:
    """
    L = [Q --phi--> P] over S with Q = S^c (the classes of f_j in I/I^2) and
    P = S dx (empty for the relative complex). ``data`` is None for a
    polynomial ring, where L = Omega^1 is read by polynomial weight.
    """

    presentation: AlgebraPresentation
    relative: bool
    data: Optional[KoszulInput]

    @property
    def p_rank(self) -> int:
        if self.data is None:
            return 0 if self.relative else len(self.presentation.variables)
        return self.data.p_rank

    @property
    def q_rank(self) -> int:
        return 0 if self.data is None else self.data.q_rank

    @property
    def ring(self) -> RingSpec:
        if self.data is None:
            return self.presentation.ring
        return self.data.algebra.ring

    def over_base(self, poly_weights: Optional[Sequence[int]] = None) -> ChainComplex:
        """L as a free complex over the linear-algebra ring of S."""
        if self.data is not None:
            return koszul_sym(1, self.data)
        n = self.p_rank
        weights = poly_weights if poly_weights is not None else [1]
        rank = sum(len(form_basis(n, 1, w)) for w in weights)
        return ChainComplex.concentrated(self.ring, 0, rank)

    def summary(self) -> dict:
        return {
            "presentation": self.presentation.describe(),
            "relative": self.relative,
            "degree_ranks_over_S": {"0": self.p_rank, "1": self.q_rank},
            "ring": self.ring.label,
        }


def koszul_data(p: AlgebraPresentation, relative: bool = False) -> KoszulInput:
    alg = coefficient_algebra(p)
    c = p.codimension
    if relative or not p.variables:
        return KoszulInput(alg, 0, c, ())
    jac = p.jacobian()
    phi = tuple(
        tuple(tuple(alg.element_of(jac[q][a])) for q in range(c)) for a in range(len(p.variables))
    )
    return KoszulInput(alg, len(p.variables), c, phi)


def cotangent_complex(p: AlgebraPresentation, relative: bool = False) -> CotangentComplex:
    p.require_regularity("smooth", "regseq")
    if p.is_polynomial_ring:
        return CotangentComplex(p, relative, None)
    return CotangentComplex(p, relative, koszul_data(p, relative))
