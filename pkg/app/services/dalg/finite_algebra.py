"""
Quotients k[x]/J that are finite free over k, with a monomial k-basis.

Normal forms come from a reduced grevlex Gröbner basis (sympy). Over a field
any zero-dimensional J works. Over Z the relations themselves must already be
a Gröbner basis with unit leading coefficients, so that division stays
integral and the standard monomials are a Z-basis.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Any, Sequence

import sympy

from app.core.errors import UnsupportedPresentationError
from app.core.logging_config import engine_log
from app.services.dalg.presentation import AlgebraPresentation
from app.services.linalg import Matrix, RingSpec

ORDER = "grevlex"


def _field_options(ring: RingSpec) -> dict:
    if ring.kind == "Fp":
        return {"modulus": ring.p}
    return {"domain": sympy.QQ}


def _leading_exponent(poly: sympy.Poly) -> tuple[int, ...]:
    return tuple(poly.monoms(order=ORDER)[0])


def _divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class FiniteAlgebra:
    ring: RingSpec
    symbols: tuple[sympy.Symbol, ...]
    basis: tuple[tuple[int, ...], ...]
    groebner_basis: Any = field(repr=False, compare=False)

    @classmethod
    def from_relations(
        cls, ring: RingSpec, symbols: Sequence[sympy.Symbol], relations: Sequence[sympy.Expr]
    ) -> "FiniteAlgebra":
        symbols = tuple(symbols)
        if not symbols:
            if any(sympy.Integer(r) != 0 for r in relations):
                raise UnsupportedPresentationError(
                    "a constant relation in no variables is not a free quotient of the base"
                )
            return cls(ring, (), ((),), None)
        rels = [r for r in relations if sympy.expand(r) != 0]
        if not rels:
            raise UnsupportedPresentationError("a polynomial ring is not finite over its base")
        options = _field_options(ring)
        gb = sympy.groebner(rels, *symbols, order=ORDER, **options)
        if list(gb.exprs) == [1]:
            raise UnsupportedPresentationError("the relations generate the unit ideal")
        leads = [_leading_exponent(g) for g in gb.polys]
        if ring.kind == "Z":
            cls._check_integral(rels, symbols, leads)
        bounds = []
        for i in range(len(symbols)):
            pure = [e[i] for e in leads if all(v == 0 for k, v in enumerate(e) if k != i)]
            if not pure:
                raise UnsupportedPresentationError(
                    f"k[x]/J is not finite over k: no leading term is a power of {symbols[i]}"
                )
            bounds.append(min(pure))
        basis = [
            e
            for e in product(*(range(b) for b in bounds))
            if not any(_divides(lead, e) for lead in leads)
        ]
        basis.sort(key=lambda e: (sum(e), tuple(-v for v in e)))
        alg = cls(ring, symbols, tuple(basis), gb)
        engine_log(f"finite algebra over {ring}: dimension {len(basis)}", logging.DEBUG)
        return alg

    @staticmethod
    def _check_integral(rels, symbols, leads) -> None:
        for r in rels:
            poly = sympy.Poly(r, *symbols)
            if abs(poly.coeffs(order=ORDER)[0]) != 1:
                raise UnsupportedPresentationError(
                    f"over Z each relation needs leading coefficient +-1, {r} does not"
                )
        rel_leads = [_leading_exponent(sympy.Poly(r, *symbols)) for r in rels]
        for lead in leads:
            if not any(_divides(own, lead) for own in rel_leads):
                raise UnsupportedPresentationError(
                    "over Z the relations must already form a Groebner basis"
                )

    @classmethod
    def from_presentation(cls, p: AlgebraPresentation) -> "FiniteAlgebra":
        return cls.from_relations(p.ring, p.symbols, p.relations)

    # CoefficientAlgebra

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {e: k for k, e in enumerate(self.basis)}

    def monomial(self, k: int) -> sympy.Expr:
        return sympy.Mul(*(s**e for s, e in zip(self.symbols, self.basis[k])))

    def normal_form(self, expr: sympy.Expr) -> sympy.Expr:
        if self.groebner_basis is None:
            return sympy.expand(expr)
        return self.groebner_basis.reduce(sympy.expand(expr))[1]

    def element_of(self, expr: sympy.Expr) -> tuple:
        """Coordinates of a polynomial in the monomial basis."""
        ring = self.ring
        coords = [ring.zero] * self.dim
        reduced = self.normal_form(expr)
        if not self.symbols:
            coords[0] = ring.reduce(Fraction(str(sympy.Rational(reduced))))
            return tuple(coords)
        for exps, c in sympy.Poly(reduced, *self.symbols).terms():
            if c == 0:
                continue
            value = ring.reduce(Fraction(int(c.p), int(c.q)))
            coords[self._index[tuple(exps)]] = ring.add(coords[self._index[tuple(exps)]], value)
        return tuple(coords)

    def expression_of(self, element: Sequence[Any]) -> sympy.Expr:
        return sympy.Add(
            *(sympy.Rational(str(v)) * self.monomial(k) for k, v in enumerate(element) if v != 0)
        )

    @cached_property
    def _products(self) -> list[list[tuple]]:
        return [
            [self.element_of(self.monomial(i) * self.monomial(j)) for j in range(self.dim)]
            for i in range(self.dim)
        ]

    def multiply(self, u: Sequence[Any], v: Sequence[Any]) -> tuple:
        ring = self.ring
        out = [ring.zero] * self.dim
        for i, a in enumerate(u):
            if a == 0:
                continue
            for j, b in enumerate(v):
                if b == 0:
                    continue
                ab = ring.mul(a, b)
                for k, c in enumerate(self._products[i][j]):
                    if c != 0:
                        out[k] = ring.add(out[k], ring.mul(ab, c))
        return tuple(out)

    def multiplication_matrix(self, element: Sequence[Any]) -> Matrix:
        """Matrix of b -> element * b in the monomial basis."""
        cols = []
        for j in range(self.dim):
            unit = [self.ring.zero] * self.dim
            unit[j] = self.ring.one
            cols.append(self.multiply(element, unit))
        return Matrix.from_columns(self.ring, cols, self.dim)

    def is_zero(self, element: Sequence[Any]) -> bool:
        return all(v == 0 for v in element)

    @property
    def one(self) -> tuple:
        return self.element_of(sympy.Integer(1))

    def matrix_of(self, expr: sympy.Expr) -> Matrix:
        return self.multiplication_matrix(self.element_of(expr))
