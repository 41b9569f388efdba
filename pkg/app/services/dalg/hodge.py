"""
Graded pieces of the Hodge-type filtrations:

    de Rham          gr^i = LΛ^i L [-i]
    infinitesimal    gr^i = LSym^i (L[-1])
    Hochschild       gr^i = LΛ^i L [i]

with L the cotangent complex of the presentation.
"""
from __future__ import annotations

import logging
from typing import Optional, Sequence

from app.core.config import settings
from app.core.errors import InputError, NonConnectiveError, UnsupportedPresentationError
from app.core.logging_config import engine_log
from app.services.complexes import ChainComplex, shift
from app.services.dalg.cotangent import CotangentComplex, cotangent_complex, form_basis
from app.services.dalg.presentation import AlgebraPresentation
from app.services.dold_kan import (
    BaseRingAlgebra,
    KoszulInput,
    PowerFunctorKind,
    derived_power,
    koszul_exterior,
    koszul_sym,
)

THEORIES = ("derham", "infinitesimal", "hochschild")
_THEORY_ALIASES = {
    "derham": "derham",
    "de_rham": "derham",
    "dr": "derham",
    "infinitesimal": "infinitesimal",
    "inf": "infinitesimal",
    "hochschild": "hochschild",
    "hh": "hochschild",
}


def parse_theory(name: str) -> str:
    key = (name or "").strip().lower().replace("-", "_")
    if key not in _THEORY_ALIASES:
        raise InputError(f"unknown theory {name!r}; use one of {THEORIES}")
    return _THEORY_ALIASES[key]


def default_poly_weights() -> list[int]:
    return list(range(settings.default_poly_weight_cutoff + 1))


def _polynomial_piece(
    p: AlgebraPresentation, theory: str, i: int, poly_weights: Sequence[int]
) -> ChainComplex:
    n = len(p.variables)
    if theory == "infinitesimal" and i > 0:
        raise NonConnectiveError(
            "LSym of Omega^1[-1] for a polynomial ring is coconnective; only i = 0 is computed"
        )
    rank = sum(len(form_basis(n, i, w)) for w in poly_weights)
    degree = {"derham": -i, "hochschild": i, "infinitesimal": 0}[theory]
    return ChainComplex.concentrated(p.ring, degree, rank)


def _base_ring_piece(
    l: CotangentComplex, theory: str, i: int, degree_cutoff: int
) -> ChainComplex:
    over_base = l.over_base()
    if theory == "infinitesimal":
        lowered = shift(over_base, -1)
        if not lowered.is_connective:
            raise NonConnectiveError("L[-1] is not connective")
        return derived_power(PowerFunctorKind("sym", i), lowered, degree_cutoff)
    kind = PowerFunctorKind("ext", i)
    if theory == "derham":
        return shift(derived_power(kind, over_base, degree_cutoff + i), -i)
    return shift(derived_power(kind, over_base, max(degree_cutoff - i, 0)), i)


def _koszul_piece(l: CotangentComplex, theory: str, i: int) -> ChainComplex:
    data = l.data
    if theory == "infinitesimal":
        if data.p_rank:
            raise NonConnectiveError(
                "L[-1] is not connective for this presentation; use the relative cotangent complex"
            )
        lowered = KoszulInput(data.algebra, data.q_rank, 0, ((),) * data.q_rank)
        return koszul_sym(i, lowered)
    piece = koszul_exterior(i, data)
    return shift(piece, -i if theory == "derham" else i)


def hodge_graded_pieces(
    p: AlgebraPresentation,
    theory: str,
    i: int,
    degree_cutoff: Optional[int] = None,
    poly_weights: Optional[Sequence[int]] = None,
    relative: bool = False,
) -> ChainComplex:
    """
    gr^i of the chosen theory as a free complex over the linear-algebra ring
    of the presentation (F_p for Z/(p)). Polynomial rings are reported as the
    sum of the requested polynomial-weight pieces.
    """
    theory = parse_theory(theory)
    if i < 0:
        raise InputError("graded pieces are indexed by i >= 0")
    degree_cutoff = settings.default_degree_cutoff if degree_cutoff is None else degree_cutoff
    l = cotangent_complex(p, relative=relative)
    if l.data is None:
        if relative:
            raise UnsupportedPresentationError("a polynomial ring has no relative cotangent complex here")
        piece = _polynomial_piece(p, theory, i, poly_weights or default_poly_weights())
    elif isinstance(l.data.algebra, BaseRingAlgebra):
        piece = _base_ring_piece(l, theory, i, degree_cutoff)
    else:
        piece = _koszul_piece(l, theory, i)
    engine_log(
        f"gr^{i} {theory} of {p.describe()}{' (relative)' if relative else ''}: ranks {dict(piece.ranks)}",
        logging.DEBUG,
    )
    return piece
