from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from app.core.errors import InputError, RingMismatchError
from app.services.complexes import (
    ChainComplex,
    HomologyTable,
    direct_sum,
    dual,
    homology,
    shift,
    tensor,
)
from app.services.linalg import RingSpec


@dataclass(frozen=True)
class GradedComplex:
    """Finitely supported family weight -> ChainComplex over one ring."""

    ring: RingSpec
    pieces: Mapping[int, ChainComplex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for w, c in self.pieces.items():
            if c.ring != self.ring:
                raise RingMismatchError(f"weight {w} piece is over {c.ring}, not {self.ring}")
        object.__setattr__(
            self, "pieces", {int(w): c for w, c in sorted(self.pieces.items()) if not c.is_zero}
        )

    @classmethod
    def unit(cls, ring: RingSpec) -> "GradedComplex":
        return cls(ring, {0: ChainComplex.concentrated(ring, 0)})

    @classmethod
    def single(cls, c: ChainComplex, weight: int) -> "GradedComplex":
        """c placed in one weight, written c(weight)."""
        return cls(c.ring, {weight: c})

    def __getitem__(self, weight: int) -> ChainComplex:
        return self.pieces.get(weight, ChainComplex.zero(self.ring))

    @property
    def weights(self) -> list[int]:
        return list(self.pieces)

    def homology(self) -> dict[int, HomologyTable]:
        return {w: homology(c) for w, c in self.pieces.items()}

    def homology_labels(self) -> dict[int, dict[int, str]]:
        return {w: t.labels() for w, t in self.homology().items() if not t.is_zero}

    def to_payload(self) -> dict:
        return {
            "ring": self.ring.label,
            "pieces": {str(w): c.to_payload() for w, c in self.pieces.items()},
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "GradedComplex":
        try:
            ring = RingSpec.parse(payload["ring"])
            pieces = {int(w): ChainComplex.from_payload(c) for w, c in payload["pieces"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed graded payload: {exc}") from exc
        return cls(ring, pieces)


def shear(x: GradedComplex, a: int) -> GradedComplex:
    """Weight n piece shifted by 2an; shear(., -a) inverts shear(., a)."""
    return GradedComplex(x.ring, {n: shift(c, 2 * a * n) for n, c in x.pieces.items()})


def day_tensor_graded(a: GradedComplex, b: GradedComplex) -> GradedComplex:
    """Weight n of the product is the sum over i + j = n of tensor(a_i, b_j)."""
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    collected: dict[int, list[ChainComplex]] = {}
    for i, ci in a.pieces.items():
        for j, cj in b.pieces.items():
            collected.setdefault(i + j, []).append(tensor(ci, cj))
    return GradedComplex(a.ring, {n: direct_sum(*cs) for n, cs in collected.items()})


def graded_direct_sum(*xs: GradedComplex) -> GradedComplex:
    ring = xs[0].ring
    weights = sorted({w for x in xs for w in x.pieces})
    return GradedComplex(
        ring, {w: direct_sum(*(x[w] for x in xs)) for w in weights}
    )


def dual_graded(x: GradedComplex) -> GradedComplex:
    """Linear dual with weights negated."""
    return GradedComplex(x.ring, {-w: dual(c) for w, c in x.pieces.items()})


def is_beilinson_static_graded(x: GradedComplex) -> bool:
    """Each weight s piece has homology only in degree -s."""
    return all(homology(c).concentrated_in(-w) for w, c in x.pieces.items())
