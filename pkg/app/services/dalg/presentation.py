"""
Finitely presented commutative algebras k[x_1..x_n] / (f_1..f_c).

Relations are sympy expressions in the presentation's symbols; parsing
accepts ``^`` for powers and needs an explicit ``*`` between factors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from tokenize import TokenError

from app.core.errors import InputError, UnsupportedPresentationError
from app.services.linalg import RingSpec

REGULARITIES = ("smooth", "regseq", "unknown")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


def parse_polynomial(text: str, symbols: Sequence[sympy.Symbol]) -> sympy.Expr:
    names = {str(s): s for s in symbols}
    try:
        expr = parse_expr(str(text), local_dict=names, transformations=_TRANSFORMATIONS)
    except (SyntaxError, TokenError, TypeError, ValueError) as exc:
        raise InputError(f"cannot parse polynomial {text!r}: {exc}") from exc
    if not isinstance(expr, sympy.Expr):
        raise InputError(f"{text!r} is not a polynomial")
    stray = {str(s) for s in expr.free_symbols} - set(names)
    if stray:
        raise InputError(f"{text!r} uses undeclared variables {sorted(stray)}")
    try:
        sympy.Poly(expr, *symbols) if symbols else sympy.Rational(expr)
    except (sympy.PolynomialError, TypeError) as exc:
        raise InputError(f"{text!r} is not a polynomial in {list(names)}") from exc
    return sympy.expand(expr)


@dataclass(frozen=True)
class AlgebraPresentation:
    """
    ``regularity`` is the caller's claim: "smooth" for a polynomial ring,
    "regseq" when the relations form a regular sequence in the listed order.
    The regular-sequence claim is recorded, not verified.
    """

    ring: RingSpec
    variables: tuple[str, ...]
    relations: tuple[sympy.Expr, ...] = ()
    regularity: str = "unknown"
    symbols: tuple[sympy.Symbol, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.regularity not in REGULARITIES:
            raise InputError(f"regularity must be one of {REGULARITIES}, got {self.regularity!r}")
        if len(set(self.variables)) != len(self.variables):
            raise InputError(f"repeated variable names in {self.variables}")
        symbols = tuple(sympy.Symbol(v) for v in self.variables)
        relations = tuple(sympy.expand(sympy.sympify(r)) for r in self.relations)
        for rel in relations:
            self._check_coefficients(rel, symbols)
        if self.regularity == "smooth" and relations:
            raise InputError("a smooth presentation is a polynomial ring: no relations")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "symbols", symbols)

    def _check_coefficients(self, rel: sympy.Expr, symbols: tuple) -> None:
        coeffs = sympy.Poly(rel, *symbols).coeffs() if symbols else [sympy.Rational(rel)]
        for c in coeffs:
            if not c.is_rational:
                raise InputError(f"coefficient {c} of {rel} is not exact")
            if self.ring.kind != "Q" and c.q != 1:
                raise InputError(f"coefficient {c} of {rel} is not in {self.ring}")

    @classmethod
    def parse(
        cls,
        ring: RingSpec | str,
        variables: Sequence[str],
        relations: Sequence[str] = (),
        regularity: str = "unknown",
    ) -> "AlgebraPresentation":
        ring = RingSpec.parse(ring) if isinstance(ring, str) else ring
        symbols = [sympy.Symbol(v) for v in variables]
        rels = tuple(parse_polynomial(r, symbols) for r in relations)
        return cls(ring, tuple(variables), rels, regularity)

    @classmethod
    def from_payload(cls, payload: dict) -> "AlgebraPresentation":
        try:
            return cls.parse(
                payload["ring"],
                list(payload.get("vars", [])),
                list(payload.get("rels", [])),
                payload.get("regularity", "unknown"),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed presentation payload: {exc}") from exc

    def to_payload(self) -> dict:
        return {
            "ring": self.ring.label,
            "vars": list(self.variables),
            "rels": [str(r).replace("**", "^") for r in self.relations],
            "regularity": self.regularity,
        }

    @property
    def is_polynomial_ring(self) -> bool:
        return not self.relations

    @property
    def codimension(self) -> int:
        return len(self.relations)

    def jacobian(self) -> list[list[sympy.Expr]]:
        """Row j holds the partial derivatives of f_j."""
        return [[sympy.diff(f, x) for x in self.symbols] for f in self.relations]

    def require_regularity(self, *allowed: str) -> None:
        if self.regularity not in allowed:
            raise UnsupportedPresentationError(
                f"needs regularity in {allowed}, presentation says {self.regularity!r}"
            )

    def constant_quotient(self) -> Optional[int]:
        """c when the presentation is k/(c) with no variables."""
        if self.variables or len(self.relations) != 1:
            return None
        return int(self.relations[0]) if self.relations[0].is_Integer else None

    def describe(self) -> str:
        names = ",".join(self.variables)
        base = f"{self.ring.display}[{names}]" if names else self.ring.display
        if not self.relations:
            return base
        return f"{base}/({', '.join(str(r) for r in self.relations)})"

    def __repr__(self) -> str:
        return f"AlgebraPresentation({self.describe()}, {self.regularity})"
