"""
Value tables of the graded LSym monads on a free object M(n).

    N[a]          weight nr:  LSym^r(M[-2an]) [2anr]
    B[a]          weight nr:  LSym^r or LAntiSym^r of M[n-2an], shifted [-nr+2anr]
    B[a]-strict   weight nr:  Sym^r or Λ^r in place of LSym^r / LAntiSym^r

For B the functor depends on the parity of n (Sym for even n).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from app.core.config import settings
from app.core.errors import InputError
from app.core.logging_config import engine_log
from app.services.complexes import ChainComplex, shift
from app.services.dold_kan import PowerFunctorKind, derived_power
from app.services.filtered import GradedComplex, day_tensor_graded, is_beilinson_static_graded
from app.services.linalg import ZZ

FLAVORS = ("N", "B", "B-strict")


def parse_flavor(name: str) -> str:
    key = (name or "").strip().replace("_", "-")
    lowered = key.lower()
    for flavor in FLAVORS:
        if lowered == flavor.lower():
            return flavor
    raise InputError(f"unknown monad flavor {name!r}; use one of {FLAVORS}")


def _plan(flavor: str, a: int, n: int, r: int) -> tuple[str, int, int]:
    """(functor kind, inner shift, outer shift) for weight n*r."""
    if flavor == "N":
        return "sym", -2 * a * n, 2 * a * n * r
    even = n % 2 == 0
    if flavor == "B":
        kind = "sym" if even else "antisym"
    else:
        kind = "sym" if even else "ext"
    return kind, n - 2 * a * n, -n * r + 2 * a * n * r


def graded_free_table(
    flavor: str,
    a: int,
    m: ChainComplex,
    n: int,
    weight_cutoff: Optional[int] = None,
    degree_cutoff: Optional[int] = None,
) -> GradedComplex:
    """
    The free algebra on m placed in weight n, weights n*r for |n*r| up to
    weight_cutoff. Each piece is exact in degrees <= degree_cutoff.
    """
    flavor = parse_flavor(flavor)
    if n == 0:
        raise InputError("the generator weight n must be nonzero")
    weight_cutoff = settings.default_weight_cutoff if weight_cutoff is None else weight_cutoff
    degree_cutoff = settings.default_degree_cutoff if degree_cutoff is None else degree_cutoff
    if weight_cutoff < 0:
        raise InputError("weight cutoff must be nonnegative")
    pieces = {}
    for r in range(weight_cutoff // abs(n) + 1):
        kind, inner, outer = _plan(flavor, a, n, r)
        value = derived_power(PowerFunctorKind(kind, r), shift(m, inner), max(degree_cutoff - outer, 0))
        pieces[n * r] = shift(value, outer)
    table = GradedComplex(m.ring, pieces)
    engine_log(
        f"{flavor}[{a}] table on {m!r} in weight {n}: {table.homology_labels()}",
        logging.DEBUG,
    )
    return table


@dataclass(frozen=True)
class TorInterference:
    """
    R = LSym^{B[0]}(Z(1)) is Beilinson-static but R (x) R is not: in weight
    4 the two copies of Z/2 in weight 2 produce a Tor class one degree up.
    The free algebra on Z(1) + Z(1) stays static.
    """

    square_weight4: dict[int, str]
    square_static: bool
    free_on_two_weight4: dict[int, str]
    free_on_two_static: bool

    def to_payload(self) -> dict:
        return {
            "square_weight4": {str(k): v for k, v in self.square_weight4.items()},
            "square_static": self.square_static,
            "free_on_two_weight4": {str(k): v for k, v in self.free_on_two_weight4.items()},
            "free_on_two_static": self.free_on_two_static,
        }


def tor_interference_example(degree_cutoff: int = 6) -> TorInterference:
    heart_generator = ChainComplex.concentrated(ZZ, -1)
    r = graded_free_table("B", 0, heart_generator, 1, 4, degree_cutoff)
    square = day_tensor_graded(r, r)
    weight4 = GradedComplex(ZZ, {4: square[4]})
    free = graded_free_table("B", 0, ChainComplex.concentrated(ZZ, -1, 2), 1, 4, degree_cutoff)
    free4 = GradedComplex(ZZ, {4: free[4]})
    return TorInterference(
        weight4.homology_labels().get(4, {}),
        is_beilinson_static_graded(weight4),
        free4.homology_labels().get(4, {}),
        is_beilinson_static_graded(free4),
    )
