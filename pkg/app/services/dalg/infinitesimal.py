"""
Infinitesimal cohomology of a regular quotient S = R/I as the I-adic stub.

When I is generated by a regular sequence, Sym^s(I/I^2) = I^s/I^{s+1}, so the
filtered object F^s = I^s (modulo I^N) is the stub of Π_{S/R}. For Z/(c) this
is the c-adic stub of Z; with variables the powers of I are computed as
k-subspaces of the finite algebra R/I^N.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

import sympy

from app.core.errors import InputError, UnsupportedPresentationError
from app.core.logging_config import engine_log
from app.services.complexes import ChainComplex, ChainMap, homology_presentation
from app.services.dalg.finite_algebra import FiniteAlgebra
from app.services.dalg.presentation import AlgebraPresentation
from app.services.filtered import FilteredStub, graded_pieces, ideal_power_stub, padic_stub
from app.services.linalg import Matrix, RingSpec, column_space_basis, solve


def _ideal_power_generators(generators: Sequence[sympy.Expr], s: int) -> list[sympy.Expr]:
    return [sympy.expand(sympy.Mul(*combo)) for combo in combinations_with_replacement(generators, s)]


@dataclass(frozen=True)
class IAdicFiltration:
    """
    bases[s] holds k-coordinates (columns, in the monomial basis of
    ``algebra`` = R/I^N) of a basis of I^s/I^N, for s = 0..N.
    """

    algebra: FiniteAlgebra
    generators: tuple[sympy.Expr, ...]
    N: int
    bases: tuple[Matrix, ...]

    @property
    def ring(self) -> RingSpec:
        return self.algebra.ring

    def graded_dims(self) -> list[int]:
        """k-ranks of I^s/I^{s+1} for s < N."""
        return [self.bases[s].cols - self.bases[s + 1].cols for s in range(self.N)]

    def _span_with_next(self, columns: list[tuple], s: int) -> Matrix:
        ring, dim = self.ring, self.algebra.dim
        gathered = Matrix.from_columns(ring, columns, dim) if columns else Matrix.zeros(ring, dim, 0)
        return column_space_basis(gathered.hstack(self.bases[s + 1]))

    def _covers(self, columns: list[tuple], s: int) -> bool:
        """Do columns together with I^{s+1} span I^s?"""
        if s >= self.N:
            return True
        span = self._span_with_next(columns, s)
        return solve(span, self.bases[s]) is not None

    def multiplication_surjective(self, i: int, j: int) -> bool:
        """I^i/I^{i+1} (x) I^j/I^{j+1} -> I^{i+j}/I^{i+j+1} is onto."""
        alg = self.algebra
        products = [
            alg.multiply(u, v) for u in self.bases[i].columns() for v in self.bases[j].columns()
        ]
        return self._covers(products, i + j)

    def symmetric_power_surjective(self, s: int, lifts: Sequence[sympy.Expr]) -> bool:
        """Sym^s(I/I^2) -> I^s/I^{s+1}: monomials of degree s in the generators, times lifts."""
        alg = self.algebra
        columns = [
            alg.element_of(m * f)
            for f in _ideal_power_generators(self.generators, s)
            for m in lifts
        ]
        return self._covers(columns, s)

    def stub(self) -> FilteredStub:
        ring = self.ring
        complexes = [ChainComplex.concentrated(ring, 0, b.cols) for b in self.bases]
        inclusions = []
        for s in range(self.N):
            m = solve(self.bases[s], self.bases[s + 1])
            if m is None:  # pragma: no cover - I^{s+1} sits inside I^s
                raise UnsupportedPresentationError("ideal powers are not nested")
            inclusions.append(ChainMap(complexes[s + 1], complexes[s], {0: m}))
        return FilteredStub.from_filtration(complexes, inclusions)


def iadic_filtration(
    ring: RingSpec, symbols: Sequence[sympy.Symbol], generators: Sequence[sympy.Expr], N: int
) -> IAdicFiltration:
    if N < 1:
        raise InputError("an I-adic stub needs N >= 1")
    alg = FiniteAlgebra.from_relations(ring, symbols, _ideal_power_generators(generators, N))
    bases = []
    for s in range(N + 1):
        columns = [
            alg.element_of(alg.monomial(k) * g)
            for g in _ideal_power_generators(generators, s)
            for k in range(alg.dim)
        ]
        gathered = Matrix.from_columns(ring, columns, alg.dim) if columns else Matrix.zeros(ring, alg.dim, 0)
        bases.append(column_space_basis(gathered))
    return IAdicFiltration(alg, tuple(generators), N, tuple(bases))


def infinitesimal_stub(p: AlgebraPresentation, N: int) -> FilteredStub:
    """The I-adic stub of the presenting ring, for S = R/I with I regular."""
    p.require_regularity("regseq")
    if N < 1:
        raise InputError("a stub needs N >= 1")
    c = p.constant_quotient()
    if c is not None:
        if p.ring.kind != "Z" or c == 0 or abs(c) == 1:
            raise UnsupportedPresentationError(f"{p.describe()} is not a regular quotient of {p.ring}")
        stub = ideal_power_stub(p.ring, [abs(c)] * N, N)
    elif p.variables and p.relations:
        stub = iadic_filtration(p.ring, p.symbols, p.relations, N).stub()
    else:
        raise UnsupportedPresentationError(f"{p.describe()} has no ideal to filter by")
    engine_log(
        f"infinitesimal stub of {p.describe()}, N={N}: gr ranks {[dict(g.ranks) for g in graded_pieces(stub)]}",
        logging.INFO,
    )
    return stub


def padic_multiplication_check(p: int, N: int) -> dict[tuple[int, int], bool]:
    """
    For i + j < N: is H_0(gr^i) (x) H_0(gr^j) -> H_0(gr^{i+j}) on the p-adic
    stub an isomorphism? The class p^s is the first degree-0 basis vector of
    gr^s, and the product of p^i and p^j is p^{i+j}.
    """
    stub = padic_stub(p, N)
    pieces = graded_pieces(stub)
    presentations = [homology_presentation(g, 0) for g in pieces]
    out = {}
    for i in range(N):
        for j in range(N - i):
            target = presentations[i + j]
            orders = target.orders
            src_i, src_j = presentations[i].orders, presentations[j].orders
            if len(orders) != 1 or len(src_i) != 1 or len(src_j) != 1:
                out[(i, j)] = False
                continue
            size = pieces[i + j].rank(0)
            product_class = target.class_of(tuple(1 if k == 0 else 0 for k in range(size)))
            order = orders[0]
            same_order = sympy.gcd(src_i[0], src_j[0]) == order
            out[(i, j)] = bool(same_order and sympy.gcd(product_class[0], order) == 1)
    return out


@dataclass(frozen=True)
class QrspReport:
    p: int
    level: int
    N: int
    graded_dims: tuple[int, ...]
    ranks_over_quotient: tuple[int, ...]
    surjective: tuple[bool, ...]

    @property
    def free_rank_one(self) -> bool:
        return all(r == 1 for r in self.ranks_over_quotient)

    def to_payload(self) -> dict:
        return {
            "p": self.p,
            "level": self.level,
            "N": self.N,
            "graded_dims": list(self.graded_dims),
            "ranks_over_quotient": list(self.ranks_over_quotient),
            "surjective": list(self.surjective),
            "free_rank_one": self.free_rank_one,
        }


def qrsp_truncated_check(level: int, N: int, p: int = 2) -> QrspReport:
    """
    Finite stand-in for F_p[x^{1/p^inf}]/(x): t = x^{1/p^L}, the ring
    F_p[t] with I = (t^{p^L}) and quotient R_L = F_p[t]/(t^{p^L}). Checks
    gr^n = I^n/I^{n+1} for n = 0..N against Sym^n(I/I^2), which is free of
    rank one over R_L.
    """
    if level < 0 or N < 0:
        raise InputError("level and N must be nonnegative")
    ring = RingSpec.prime_field(p)
    t = sympy.Symbol("t")
    width = p**level
    filtration = iadic_filtration(ring, [t], [t**width], N + 1)
    dims = filtration.graded_dims()
    lifts = [t**k for k in range(width)]
    surjective = tuple(filtration.symmetric_power_surjective(n, lifts) for n in range(N + 1))
    ranks = tuple(d // width if d % width == 0 else -1 for d in dims)
    report = QrspReport(p, level, N, tuple(dims), ranks, surjective)
    engine_log(f"qrsp level {level} over F_{p}: {report.to_payload()}", logging.DEBUG)
    return report
