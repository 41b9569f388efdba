"""
Exact-category toolkit on free chain complexes.

Sign conventions:
- shift(c, n)_i = c_{i-n} with differential (-1)^n d.
- tensor: d(a (x) b) = da (x) b + (-1)^|a| a (x) db, summands ordered by the
  degree of the left factor, basis of each block is left-index major.
- cone(f: A -> B)_n = B_n + A_{n-1}, d(b, a) = (db + f(a), -da).
"""
from __future__ import annotations

from dataclasses import dataclass

from sympy import primefactors

from app.core.errors import RingMismatchError
from app.services.complexes.chain_complex import ChainComplex, ChainMap
from app.services.complexes.homology import HomologyTable, homology, induced_map
from app.services.linalg import Matrix, RingSpec, block_matrix, kernel_basis, rank, solve


def _same_ring(a: ChainComplex, b: ChainComplex) -> None:
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")


def shift(c: ChainComplex, n: int) -> ChainComplex:
    if n == 0:
        return c
    sign = -1 if n % 2 else 1
    return ChainComplex(
        c.ring,
        {i + n: r for i, r in c.ranks.items()},
        {i + n: m.scale(sign) if sign < 0 else m for i, m in c.differentials.items()},
        None if c.truncated_above is None else c.truncated_above + n,
    )


def shift_map(f: ChainMap, n: int) -> ChainMap:
    return ChainMap(
        shift(f.source, n),
        shift(f.target, n),
        {i + n: m for i, m in f.components.items()},
    )


def direct_sum(*complexes: ChainComplex) -> ChainComplex:
    if not complexes:
        raise ValueError("direct_sum needs at least one complex")
    ring = complexes[0].ring
    for c in complexes[1:]:
        _same_ring(complexes[0], c)
    degrees = sorted({i for c in complexes for i in c.ranks})
    ranks = {i: sum(c.rank(i) for c in complexes) for i in degrees}
    diffs = {}
    for i in degrees:
        if i - 1 not in ranks:
            continue
        mat = Matrix.zeros(ring, 0, 0)
        for c in complexes:
            mat = mat.direct_sum(c.d(i))
        diffs[i] = mat
    truncs = [c.truncated_above for c in complexes if c.truncated_above is not None]
    return ChainComplex(ring, ranks, diffs, min(truncs) if truncs else None)


def direct_sum_map(*maps: ChainMap) -> ChainMap:
    source = direct_sum(*(f.source for f in maps))
    target = direct_sum(*(f.target for f in maps))
    ring = source.ring
    comps = {}
    for i in source.ranks:
        mat = Matrix.zeros(ring, 0, 0)
        for f in maps:
            mat = mat.direct_sum(f.f(i))
        comps[i] = mat
    return ChainMap(source, target, comps)


@dataclass(frozen=True)
class TensorBlock:
    left_degree: int
    right_degree: int
    offset: int
    size: int


def tensor_layout(a: ChainComplex, b: ChainComplex) -> dict[int, list[TensorBlock]]:
    """For each total degree, the (p, q) blocks of a (x) b with their offsets."""
    layout: dict[int, list[TensorBlock]] = {}
    for p, ra in a.ranks.items():
        for q, rb in b.ranks.items():
            layout.setdefault(p + q, []).append(TensorBlock(p, q, 0, ra * rb))
    out = {}
    for n in sorted(layout):
        blocks, offset = [], 0
        for blk in sorted(layout[n], key=lambda x: x.left_degree):
            blocks.append(TensorBlock(blk.left_degree, blk.right_degree, offset, blk.size))
            offset += blk.size
        out[n] = blocks
    return out


def tensor(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Total complex of a (x) b with the Koszul sign."""
    _same_ring(a, b)
    ring = a.ring
    layout = tensor_layout(a, b)
    ranks = {n: sum(blk.size for blk in blocks) for n, blocks in layout.items()}
    diffs = {}
    for n, blocks in layout.items():
        if n - 1 not in layout:
            continue
        below = {(blk.left_degree, blk.right_degree): blk for blk in layout[n - 1]}
        items = []
        for blk in blocks:
            p, q = blk.left_degree, blk.right_degree
            if (p - 1, q) in below:
                tgt = below[(p - 1, q)]
                part = a.d(p).kron(Matrix.identity(ring, b.rank(q)))
                items += [(tgt.offset + i, blk.offset + j, v) for i, j, v in part.nonzero_items()]
            if (p, q - 1) in below:
                tgt = below[(p, q - 1)]
                part = Matrix.identity(ring, a.rank(p)).kron(b.d(q))
                sign = -1 if p % 2 else 1
                items += [
                    (tgt.offset + i, blk.offset + j, sign * v) for i, j, v in part.nonzero_items()
                ]
        diffs[n] = Matrix.from_sparse(ring, ranks[n - 1], ranks[n], items)
    truncs = []
    if a.truncated_above is not None:
        truncs.append(a.truncated_above + (b.lo if not b.is_zero else 0))
    if b.truncated_above is not None:
        truncs.append(b.truncated_above + (a.lo if not a.is_zero else 0))
    return ChainComplex(ring, ranks, diffs, min(truncs) if truncs else None)


def tensor_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """f (x) g for degree-zero chain maps (no sign is needed)."""
    source = tensor(f.source, g.source)
    target = tensor(f.target, g.target)
    ring = source.ring
    src_layout = tensor_layout(f.source, g.source)
    tgt_layout = tensor_layout(f.target, g.target)
    comps = {}
    for n, blocks in src_layout.items():
        if n not in tgt_layout:
            continue
        tgt_blocks = {(b.left_degree, b.right_degree): b for b in tgt_layout[n]}
        items = []
        for blk in blocks:
            key = (blk.left_degree, blk.right_degree)
            if key not in tgt_blocks:
                continue
            tgt = tgt_blocks[key]
            part = f.f(key[0]).kron(g.f(key[1]))
            items += [(tgt.offset + i, blk.offset + j, v) for i, j, v in part.nonzero_items()]
        comps[n] = Matrix.from_sparse(ring, target.rank(n), source.rank(n), items)
    return ChainMap(source, target, comps)


def cone(f: ChainMap) -> ChainComplex:
    a, b = f.source, f.target
    ring = a.ring
    degrees = sorted(set(b.ranks) | {i + 1 for i in a.ranks})
    ranks = {n: b.rank(n) + a.rank(n - 1) for n in degrees}
    diffs = {}
    for n in degrees:
        diffs[n] = block_matrix(
            ring,
            [[b.d(n), f.f(n - 1)], [None, -a.d(n - 1)]],
            [b.rank(n - 1), a.rank(n - 2)],
            [b.rank(n), a.rank(n - 1)],
        )
    return ChainComplex(ring, ranks, {n: m for n, m in diffs.items() if n - 1 in ranks and n in ranks})


def cone_inclusion(f: ChainMap) -> ChainMap:
    """B -> cone(f), b -> (b, 0)."""
    c = cone(f)
    ring = f.ring
    return ChainMap(
        f.target,
        c,
        {
            n: Matrix.identity(ring, r).vstack(Matrix.zeros(ring, f.source.rank(n - 1), r))
            for n, r in f.target.ranks.items()
        },
    )


def cone_projection(f: ChainMap) -> ChainMap:
    """cone(f) -> A[1], (b, a) -> a."""
    c = cone(f)
    ring = f.ring
    return ChainMap(
        c,
        shift(f.source, 1),
        {
            n: Matrix.zeros(ring, f.source.rank(n - 1), f.target.rank(n)).hstack(
                Matrix.identity(ring, f.source.rank(n - 1))
            )
            for n in c.ranks
        },
    )


@dataclass(frozen=True)
class MappingCylinder:
    """
    Cyl(f)_n = A_n + B_n + A_{n-1}, d(a, b, a') = (da + a', db - f(a'), -da').

    ``inclusion`` (a -> (a, 0, 0)) is degreewise split injective and
    ``projection`` ((a, b, a') -> f(a) + b) is a quasi-isomorphism with
    projection o inclusion = f.
    """

    complex: ChainComplex
    inclusion: ChainMap
    projection: ChainMap
    target_inclusion: ChainMap


def mapping_cylinder(f: ChainMap) -> MappingCylinder:
    a, b = f.source, f.target
    ring = a.ring
    degrees = sorted(set(a.ranks) | set(b.ranks) | {i + 1 for i in a.ranks})
    ranks = {n: a.rank(n) + b.rank(n) + a.rank(n - 1) for n in degrees}

    def sizes(n: int) -> list[int]:
        return [a.rank(n), b.rank(n), a.rank(n - 1)]

    diffs = {}
    for n in degrees:
        if n - 1 not in ranks:
            continue
        diffs[n] = block_matrix(
            ring,
            [
                [a.d(n), None, Matrix.identity(ring, a.rank(n - 1))],
                [None, b.d(n), -f.f(n - 1)],
                [None, None, -a.d(n - 1)],
            ],
            sizes(n - 1),
            sizes(n),
        )
    cyl = ChainComplex(ring, ranks, diffs)
    inclusion = {
        n: block_matrix(ring, [[Matrix.identity(ring, a.rank(n))], [None], [None]], sizes(n), [a.rank(n)])
        for n in a.ranks
    }
    target_inclusion = {
        n: block_matrix(ring, [[None], [Matrix.identity(ring, b.rank(n))], [None]], sizes(n), [b.rank(n)])
        for n in b.ranks
    }
    projection = {
        n: block_matrix(
            ring, [[f.f(n), Matrix.identity(ring, b.rank(n)), None]], [b.rank(n)], sizes(n)
        )
        for n in degrees
    }
    return MappingCylinder(
        complex=cyl,
        inclusion=ChainMap(a, cyl, inclusion),
        projection=ChainMap(cyl, b, projection),
        target_inclusion=ChainMap(b, cyl, target_inclusion),
    )


def truncation_inclusion(c: ChainComplex, n: int) -> ChainMap:
    """
    The inclusion tau_{>=n} c -> c.

    Degree n of the truncation is the saturated kernel of d_n, so the result
    stays levelwise free and its H_i agrees with c for i >= n.
    """
    ring = c.ring
    k = kernel_basis(c.d(n))
    ranks = {i: r for i, r in c.ranks.items() if i > n}
    ranks[n] = k.cols
    diffs = {i: m for i, m in c.differentials.items() if i > n + 1}
    if n + 1 in c.ranks and k.cols:
        lifted = solve(k, c.d(n + 1))
        diffs[n + 1] = lifted
    sub = ChainComplex(ring, ranks, diffs, c.truncated_above)
    comps = {i: Matrix.identity(ring, r) for i, r in c.ranks.items() if i > n}
    comps[n] = k
    return ChainMap(sub, c, comps)


def truncate_connective(c: ChainComplex, n: int) -> ChainComplex:
    return truncation_inclusion(c, n).source


def dual(c: ChainComplex) -> ChainComplex:
    """Hom(c, ring) with degrees negated; d^v_j is the transpose of d_{1-j}."""
    return ChainComplex(
        c.ring,
        {-i: r for i, r in c.ranks.items()},
        {1 - i: m.transpose() for i, m in c.differentials.items()},
    )


def change_ring(c: ChainComplex, target: RingSpec) -> ChainComplex:
    if target == c.ring:
        return c
    return ChainComplex(
        target,
        c.ranks,
        {i: m.change_ring(target) for i, m in c.differentials.items()},
        c.truncated_above,
    )


def change_ring_map(f: ChainMap, target: RingSpec) -> ChainMap:
    return ChainMap(
        change_ring(f.source, target),
        change_ring(f.target, target),
        {i: m.change_ring(target) for i, m in f.components.items()},
    )


def euler_characteristic(c: ChainComplex) -> int:
    return c.euler_characteristic()


def is_quasi_iso(f: ChainMap) -> bool:
    """True iff every H_i(f) is an isomorphism, i.e. cone(f) is acyclic."""
    return homology(cone(f)).is_zero


def minimal_model(table: HomologyTable) -> ChainComplex:
    """
    The smallest free complex with the given homology over a PID.

    Degree i holds free generators of H_i, one generator per torsion summand
    of H_i, and one relation generator per torsion summand of H_{i-1}.
    """
    ring = table.ring
    degrees = sorted(set(table.entries) | {i + 1 for i, m in table.entries.items() if m.torsion})
    ranks, layout = {}, {}
    for i in degrees:
        h = table[i]
        below = table[i - 1]
        layout[i] = (h.free_rank, len(h.torsion), len(below.torsion))
        ranks[i] = sum(layout[i])
    diffs = {}
    for i in degrees:
        if i - 1 not in ranks:
            continue
        free_lo, tor_lo, rel_lo = layout[i - 1]
        free, tor, rel = layout[i]
        items = []
        for k, d in enumerate(table[i - 1].torsion):
            items.append((free_lo + k, free + tor + k, d))
        diffs[i] = Matrix.from_sparse(ring, ranks[i - 1], ranks[i], items)
    return ChainComplex(ring, ranks, diffs)


def long_exact_sequence_check(f: ChainMap) -> bool:
    """
    Dimension count of the long exact sequence of A -> B -> cone(f).

    Checked over every field where it can fail: over Z that is Q and F_p for the
    primes dividing some torsion of A, B or cone(f).
    """
    if f.ring.is_field:
        return _les_over_field(f)
    primes: set[int] = set()
    for c in (f.source, f.target, cone(f)):
        for m in homology(c).entries.values():
            for d in m.torsion:
                primes.update(primefactors(d))
    fields = [RingSpec.rationals()] + [RingSpec.prime_field(p) for p in sorted(primes)]
    return all(_les_over_field(change_ring_map(f, k)) for k in fields)


def _les_over_field(f: ChainMap) -> bool:
    h_cone = homology(cone(f))
    degrees = set(f.source.ranks) | set(f.target.ranks) | {i + 1 for i in f.source.ranks}
    h_a, h_b = homology(f.source), homology(f.target)
    for n in sorted(degrees):
        rank_n = rank(induced_map(f, n)) if h_a[n].free_rank and h_b[n].free_rank else 0
        rank_prev = (
            rank(induced_map(f, n - 1)) if h_a[n - 1].free_rank and h_b[n - 1].free_rank else 0
        )
        expected = (h_b[n].free_rank - rank_n) + (h_a[n - 1].free_rank - rank_prev)
        if h_cone[n].free_rank != expected:
            return False
    return True
