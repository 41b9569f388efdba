from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from app.core.errors import InputError, PreconditionError, RingMismatchError
from app.services.linalg.matrix import Matrix
from app.services.linalg.rings import RingSpec
from app.services.linalg.sparse import invariant_factors

_SUMMAND = re.compile(
    r"^(?:\((?P<tor1>Z/\d+)\)\^(?P<mult1>\d+)|(?P<tor2>Z/\d+)|(?P<free>Z|Q|F_\d+)(?:\^(?P<rank>\d+))?)$"
)


@dataclass(frozen=True)
class FgModule:
    """
    A finitely generated module over Z, Q or F_p: free part plus torsion.

    Torsion is kept as invariant factors d_1 | d_2 | ... with every d_i > 1.
    Over a field the torsion tuple is always empty.
    """

    ring: RingSpec
    free_rank: int = 0
    torsion: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise InputError("free rank must be nonnegative")
        if self.ring.is_field and self.torsion:
            raise InputError(f"torsion is impossible over {self.ring}")
        if any(d <= 1 for d in self.torsion):
            raise InputError("invariant factors must exceed 1")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise InputError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def zero(cls, ring: RingSpec) -> "FgModule":
        return cls(ring)

    @classmethod
    def free(cls, ring: RingSpec, rank: int) -> "FgModule":
        return cls(ring, rank)

    @classmethod
    def from_factors(cls, ring: RingSpec, free_rank: int, factors) -> "FgModule":
        """Normalize an arbitrary list of cyclic orders into invariant factors."""
        return cls(ring, free_rank, _invariant_chain([int(d) for d in factors if abs(int(d)) > 1]))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def order(self) -> Optional[int]:
        """Cardinality of a finite module over Z, None otherwise."""
        if self.free_rank or self.ring.kind != "Z":
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def direct_sum(self, other: "FgModule") -> "FgModule":
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")
        return FgModule.from_factors(
            self.ring, self.free_rank + other.free_rank, self.torsion + other.torsion
        )

    def __add__(self, other: "FgModule") -> "FgModule":
        return self.direct_sum(other)

    def restrict_to_integers(self) -> "FgModule":
        """An F_p-vector space of dimension r viewed as the abelian group (Z/p)^r."""
        if self.ring.kind == "Z":
            return self
        if self.ring.kind == "Q":
            raise PreconditionError("a Q-vector space is not finitely generated over Z")
        return FgModule(RingSpec.integers(), 0, (self.ring.p,) * self.free_rank)

    @property
    def label(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append(self.ring.display)
        elif self.free_rank > 1:
            parts.append(f"{self.ring.display}^{self.free_rank}")
        i = 0
        while i < len(self.torsion):
            d = self.torsion[i]
            j = i
            while j < len(self.torsion) and self.torsion[j] == d:
                j += 1
            parts.append(f"Z/{d}" if j - i == 1 else f"(Z/{d})^{j - i}")
            i = j
        return "+".join(parts) if parts else "0"

    @classmethod
    def parse(cls, label: str, ring: Optional[RingSpec] = None) -> "FgModule":
        text = (label or "").replace(" ", "")
        if text == "0":
            return cls(ring or RingSpec.integers())
        free_ring, free_rank, torsion = None, 0, []
        for piece in text.split("+"):
            match = _SUMMAND.match(piece)
            if not match:
                raise InputError(f"cannot parse module label {label!r}")
            if match.group("tor1"):
                torsion += [int(match.group("tor1")[2:])] * int(match.group("mult1"))
            elif match.group("tor2"):
                torsion.append(int(match.group("tor2")[2:]))
            else:
                name = match.group("free")
                piece_ring = RingSpec.parse(name.replace("F_", "Fp:"))
                if free_ring is not None and piece_ring != free_ring:
                    raise InputError(f"mixed base rings in {label!r}")
                free_ring = piece_ring
                free_rank += int(match.group("rank") or 1)
        base = free_ring or ring or RingSpec.integers()
        if ring is not None and base != ring:
            raise RingMismatchError(f"label {label!r} is not over {ring}")
        return cls.from_factors(base, free_rank, torsion)

    def __str__(self) -> str:
        return self.label


def _invariant_chain(orders: list[int]) -> tuple[int, ...]:
    """Invariant factors of a direct sum of cyclic groups Z/n_1 + ... + Z/n_k."""
    if not orders:
        return ()
    m = Matrix.diagonal(RingSpec.integers(), orders, len(orders), len(orders))
    return tuple(d for d in invariant_factors(m) if d > 1)


def cokernel(m: Matrix) -> FgModule:
    """target / image(m) as an FgModule."""
    factors = invariant_factors(m)
    free_rank = m.rows - len(factors)
    if m.ring.is_field:
        return FgModule(m.ring, free_rank)
    return FgModule(m.ring, free_rank, tuple(d for d in factors if d > 1))
