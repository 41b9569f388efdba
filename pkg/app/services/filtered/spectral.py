"""E1 data of a stub: the coherent cochain complex s -> H_{-s}(gr^s)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from app.services.complexes import HomologyTable, homology, homology_presentation
from app.services.filtered.stubs import FilteredStub, graded_pieces
from app.services.linalg import FgModule, Matrix, RingSpec


@dataclass(frozen=True)
class CoherentCochain:
    """
    terms[s] = H_{-s}(gr^s) with coordinates (free first, then torsion);
    d1[s] is the matrix of term s -> term s+1 in those coordinates.
    """

    ring: RingSpec
    terms: Mapping[int, FgModule]
    orders: Mapping[int, list[int]]
    d1: Mapping[int, Matrix]

    def labels(self) -> dict[int, str]:
        return {s: m.label for s, m in self.terms.items() if not m.is_zero}

    def is_cochain(self) -> bool:
        """d1 o d1 = 0, torsion coordinates compared modulo their orders."""
        for s, m in self.d1.items():
            nxt = self.d1.get(s + 1)
            if nxt is None or m.cols == 0 or nxt.rows == 0:
                continue
            product = nxt @ m
            for i, _, v in product.nonzero_items():
                order = self.orders[s + 2][i]
                if order == 0 or v % order:
                    return False
        return True


def e1_page(f: FilteredStub) -> dict[int, HomologyTable]:
    """Weight s -> homology of gr^s in all degrees."""
    return {s: homology(g) for s, g in enumerate(graded_pieces(f))}


def _connecting_matrix(f: FilteredStub, s: int, degree: int) -> Matrix:
    """
    Chain-level snake map gr^s_degree -> gr^{s+1}_{degree-1}: a class in
    F^s / F^{s+1} is lifted, hit by d, and read in F^{s+1} / F^{s+2}.

    On the cone model (b, a) in F^s + F^{s+1}[1] the lift of a cycle has
    d b = -t(a), so the connecting map is (b, a) -> -a.
    """
    ring = f.ring
    t = f.transitions[s]
    lower, upper = t.target, t.source
    src_rank = lower.rank(degree) + upper.rank(degree - 1)
    a_size = upper.rank(degree - 1)
    if s + 1 < f.N - 1:
        target = f.transitions[s + 1]
        tgt_rank = target.target.rank(degree - 1) + target.source.rank(degree - 2)
    else:
        tgt_rank = f.levels[-1].rank(degree - 1)
    offset = lower.rank(degree)
    return Matrix.from_sparse(
        ring, tgt_rank, src_rank, ((k, offset + k, -1) for k in range(a_size))
    )


def coherent_cochain(f: FilteredStub) -> CoherentCochain:
    ring = f.ring
    pieces = graded_pieces(f)
    presentations = [homology_presentation(g, -s) for s, g in enumerate(pieces)]
    terms = {s: p.module for s, p in enumerate(presentations)}
    orders = {s: p.orders for s, p in enumerate(presentations)}
    d1 = {}
    for s in range(f.N - 1):
        src, tgt = presentations[s], presentations[s + 1]
        if not src.orders or not tgt.orders:
            d1[s] = Matrix.zeros(ring, len(tgt.orders), len(src.orders))
            continue
        images = _connecting_matrix(f, s, -s) @ src.generators()
        cols = [tgt.class_of(images.column(j)) for j in range(images.cols)]
        d1[s] = Matrix.from_columns(ring, cols, len(tgt.orders))
    return CoherentCochain(ring, terms, orders, d1)


def is_beilinson_static(f: FilteredStub) -> bool:
    """gr^s has homology only in degree -s for every s."""
    return all(homology(g).concentrated_in(-s) for s, g in enumerate(graded_pieces(f)))
