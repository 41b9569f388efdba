from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping, Optional

from app.core.errors import PreconditionError
from app.core.logging_config import engine_log
from app.core.metrics import observe_homology
from app.services.complexes.chain_complex import ChainComplex, ChainMap
from app.services.linalg import (
    FgModule,
    Matrix,
    RingSpec,
    diagonalize,
    invariant_factors,
    kernel_basis,
    solve,
)


@dataclass(frozen=True)
class HomologyTable:
    """Degree -> homology module, zero modules omitted."""

    ring: RingSpec
    entries: Mapping[int, FgModule] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "entries",
            {int(i): m for i, m in sorted(self.entries.items()) if not m.is_zero},
        )

    def __getitem__(self, degree: int) -> FgModule:
        return self.entries.get(degree, FgModule.zero(self.ring))

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def labels(self) -> dict[int, str]:
        return {i: m.label for i, m in self.entries.items()}

    def free_ranks(self) -> dict[int, int]:
        return {i: m.free_rank for i, m in self.entries.items() if m.free_rank}

    def concentrated_in(self, *degrees: int) -> bool:
        return set(self.entries) <= set(degrees)

    def shifted(self, n: int) -> "HomologyTable":
        return HomologyTable(self.ring, {i + n: m for i, m in self.entries.items()})

    def restrict_to_integers(self) -> "HomologyTable":
        ring = RingSpec.integers()
        return HomologyTable(ring, {i: m.restrict_to_integers() for i, m in self.entries.items()})

    def to_payload(self) -> dict:
        return {str(i): m.label for i, m in self.entries.items()}

    @classmethod
    def from_labels(cls, ring: RingSpec, labels: Mapping[Any, str]) -> "HomologyTable":
        return cls(ring, {int(i): FgModule.parse(text, ring) for i, text in labels.items()})


def homology(c: ChainComplex) -> HomologyTable:
    """
    H_i = ker d_i / im d_{i+1} for every degree, exact.

    Uses the invariant factors of each differential: the free rank of H_i is
    rank C_i - rank d_i - rank d_{i+1} and its torsion is the non-unit part of
    the invariant factors of d_{i+1}. Degrees above ``c.truncated_above`` are
    not reported.
    """
    factors = {i: invariant_factors(m) for i, m in c.differentials.items()}
    entries = {}
    for i, n in c.ranks.items():
        if c.truncated_above is not None and i > c.truncated_above:
            continue
        r_out = len(factors.get(i, ()))
        inc = factors.get(i + 1, ())
        free = n - r_out - len(inc)
        torsion = () if c.ring.is_field else tuple(d for d in inc if d > 1)
        entries[i] = FgModule(c.ring, free, torsion)
    observe_homology(c.ring.label)
    table = HomologyTable(c.ring, entries)
    engine_log(f"homology of {c!r}: {table.labels()}", logging.DEBUG)
    return table


def is_acyclic(c: ChainComplex) -> bool:
    return homology(c).is_zero


@dataclass(frozen=True)
class HomologyPresentation:
    """
    Explicit description of H_i with a coordinate map on cycles.

    ``cycles`` is a saturated basis of ker d_i; boundaries written in that basis
    are diagonalized by ``u``. Coordinates list the free generators first, then
    the torsion generators in ascending order of their invariant factor.
    """

    ring: RingSpec
    degree: int
    cycles: Matrix
    u: Matrix
    u_inv: Matrix
    diagonal: tuple
    boundary_rank: int

    @cached_property
    def _free_slots(self) -> list[int]:
        return list(range(self.boundary_rank, self.cycles.cols))

    @cached_property
    def _torsion_slots(self) -> list[int]:
        return [j for j, d in enumerate(self.diagonal) if not self.ring.is_unit(d)]

    @property
    def module(self) -> FgModule:
        torsion = tuple(abs(int(self.diagonal[j])) for j in self._torsion_slots)
        return FgModule(self.ring, len(self._free_slots), torsion)

    @property
    def orders(self) -> list[int]:
        """0 for a free coordinate, d for a Z/d coordinate."""
        return [0] * len(self._free_slots) + [
            abs(int(self.diagonal[j])) for j in self._torsion_slots
        ]

    def generators(self) -> Matrix:
        """Columns are cycles representing the coordinate generators."""
        slots = self._free_slots + self._torsion_slots
        return self.cycles @ self.u_inv.select_columns(slots)

    def class_of(self, cycle) -> tuple:
        """Coordinates of the class of a cycle (torsion coordinates reduced)."""
        if self.cycles.cols == 0:
            return ()
        coords = solve(self.cycles, Matrix.from_columns(self.ring, [tuple(cycle)], self.cycles.rows))
        if coords is None:
            raise PreconditionError(f"vector is not a cycle in degree {self.degree}")
        y = self.u.apply(coords.column(0))
        out = [y[j] for j in self._free_slots]
        for j in self._torsion_slots:
            out.append(y[j] % abs(int(self.diagonal[j])))
        return tuple(out)


def homology_presentation(c: ChainComplex, i: int) -> HomologyPresentation:
    ring = c.ring
    z = kernel_basis(c.d(i))
    boundaries = c.d(i + 1)
    if z.cols and boundaries.cols:
        in_cycles = solve(z, boundaries)
        if in_cycles is None:  # pragma: no cover - d^2 = 0 is enforced
            raise PreconditionError("boundaries are not cycles")
    else:
        in_cycles = Matrix.zeros(ring, z.cols, boundaries.cols)
    diag = diagonalize(in_cycles)
    return HomologyPresentation(
        ring=ring,
        degree=i,
        cycles=z,
        u=diag.u,
        u_inv=diag.u_inv,
        diagonal=tuple(diag.diagonal),
        boundary_rank=diag.rank,
    )


def induced_map(f: ChainMap, i: int) -> Matrix:
    """
    Matrix of H_i(f) in the coordinates of the two homology presentations.

    Column j is the class in H_i(target) of the image of generator j of
    H_i(source).
    """
    src = homology_presentation(f.source, i)
    tgt = homology_presentation(f.target, i)
    gens = src.generators()
    images = f.f(i) @ gens
    cols = [tgt.class_of(images.column(j)) for j in range(images.cols)]
    return Matrix.from_columns(f.ring, cols, len(tgt.orders))


def degree_table(c: ChainComplex) -> dict[int, int]:
    """Free ranks of homology; over a field these are the Betti numbers."""
    return {i: m.free_rank for i, m in homology(c).entries.items()}


def betti_numbers(c: ChainComplex, p: Optional[int] = None) -> dict[int, int]:
    """Betti numbers of c over Q, or over F_p when p is given (c over Z)."""
    from app.services.complexes.operations import change_ring

    target = RingSpec.rationals() if p is None else RingSpec.prime_field(p)
    return degree_table(change_ring(c, target))
