"""
Divided-power side: the pd-envelope stub, de Rham stubs and the free
crystalline stubs, plus the comparison LSym^s(L[-1]) -> LΛ^s(L)[-s].

For Z/(c) the derived de Rham complex is Z<xi>/(xi - c) with the pd
filtration. In pd-weights below N its level s is the cone of multiplication
by xi - c on span(gamma_s, ..., gamma_{N-1}), using xi * gamma_a =
(a + 1) gamma_{a+1}.

For Z[x_1..x_n]/(f_1..f_c) with homogeneous f the envelope is the Koszul
complex of (xi_j - f_j) over R<xi_1..xi_c>, with Koszul generator e_j of
pd-weight 0. The de Rham stub tensors it with Omega^*_R, the connection
sending gamma_a(xi_j) to gamma_{a-1}(xi_j) df_j. Everything is graded by
polynomial weight (x_k and dx_k weight 1, xi_j and e_j weight deg f_j),
so each requested weight is a finite complex.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from math import comb, factorial
from typing import Optional, Sequence

import sympy

from app.core.config import settings
from app.core.errors import InputError, PreconditionError, UnsupportedPresentationError
from app.core.logging_config import engine_log
from app.services.complexes import (
    ChainComplex,
    ChainMap,
    homology,
    homology_presentation,
    shift,
)
from app.services.dalg.cotangent import (
    cotangent_complex,
    de_rham_matrix,
    exponents,
    form_basis,
    wedge_sign,
)
from app.services.dalg.hodge import default_poly_weights
from app.services.dalg.infinitesimal import iadic_filtration, infinitesimal_stub
from app.services.dalg.presentation import AlgebraPresentation
from app.services.dold_kan import (
    KoszulInput,
    PowerFunctorKind,
    derived_power,
    koszul_exterior,
    koszul_sym,
)
from app.services.filtered import (
    FilteredStub,
    WeightedComplex,
    graded_pieces,
    ideal_power_stub,
    ins_stub,
    stub_direct_sum,
    subcomplex,
)
from app.services.linalg import FgModule, Matrix, ZZ, cokernel, rank, solve


def _pd_relation_matrix(c: int, N: int, s: int) -> Matrix:
    """xi - c on span(gamma_s..gamma_{N-1}), gamma_N dropped."""
    size = N - s
    items = []
    for col in range(size):
        a = s + col
        items.append((col, col, -c))
        if col + 1 < size:
            items.append((col + 1, col, a + 1))
    return Matrix.from_sparse(ZZ, size, size, items)


def _pd_level(c: int, N: int, s: int) -> ChainComplex:
    return ChainComplex.two_term(_pd_relation_matrix(c, N, s))


@dataclass(frozen=True)
class PdAlgebraStub:
    """
    ``generator`` is c for Z/(c) and None otherwise: over Q divided powers
    are ordinary powers and the stub is I-adic, over Z with variables the
    stub is the Koszul model read by polynomial weight.
    """

    presentation: AlgebraPresentation
    N: int
    stub: FilteredStub
    generator: Optional[int] = None

    @staticmethod
    def gamma_product(a: int, b: int) -> tuple[int, int]:
        """gamma_a * gamma_b = C(a+b, a) gamma_{a+b}."""
        return comb(a + b, a), a + b

    def relation_matrix(self) -> Matrix:
        if self.generator is None:
            raise PreconditionError("the relation matrix is only tabulated for Z/(c)")
        return _pd_relation_matrix(self.generator, self.N, 0)

    def is_ideal(self) -> bool:
        """The relations (xi - c) gamma_a stay relations after multiplying by any gamma_b."""
        rel = self.relation_matrix()
        for col in rel.columns():
            for b in range(self.N):
                image = [0] * self.N
                for a, v in enumerate(col):
                    if v == 0:
                        continue
                    coeff, target = self.gamma_product(a, b)
                    if target < self.N:
                        image[target] += coeff * v
                if solve(rel, Matrix.from_columns(ZZ, [image], self.N)) is None:
                    return False
        return True


# Koszul model over Z[x]

# (Koszul generators, x-exponents, pd multi-index, form wedge)
PdKey = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], tuple[int, ...]]


def _relation_degrees(p: AlgebraPresentation) -> list[int]:
    degrees = []
    for f in p.relations:
        poly = sympy.Poly(f, *p.symbols)
        if poly.is_zero or not poly.is_homogeneous:
            raise UnsupportedPresentationError(
                f"{p.describe()}: the pd model over Z is read by polynomial weight and needs "
                f"nonzero homogeneous relations, got {f}"
            )
        degrees.append(poly.total_degree())
    return degrees


def _terms(f: sympy.Expr, symbols: Sequence[sympy.Symbol]) -> list[tuple[tuple[int, ...], int]]:
    return [(tuple(e), int(c)) for e, c in sympy.Poly(f, *symbols).terms() if c != 0]


def _bump(v: tuple[int, ...], k: int, by: int) -> tuple[int, ...]:
    return v[:k] + (v[k] + by,) + v[k + 1:]


def _added(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a + b for a, b in zip(u, v))


def _pd_basis(
    n: int, degrees: Sequence[int], N: int, weight: int, with_forms: bool
) -> list[PdKey]:
    """Basis vectors of polynomial weight ``weight`` and Hodge weight below N."""
    c = len(degrees)
    out = []
    for k in range(c + 1):
        for koszul in combinations(range(c), k):
            koszul_weight = sum(degrees[j] for j in koszul)
            for hodge in range(N):
                for forms in range(min(hodge, n) + 1 if with_forms else 1):
                    for wedge in combinations(range(n), forms):
                        for pd in exponents(c, hodge - forms):
                            rest = weight - koszul_weight - forms - sum(d * a for d, a in zip(degrees, pd))
                            if rest < 0:
                                continue
                            out.extend((koszul, alpha, pd, wedge) for alpha in exponents(n, rest))
    return out


@dataclass(frozen=True)
class _PdKoszulData:
    n: int
    N: int
    relation_terms: list[list[tuple[tuple[int, ...], int]]]
    jacobian_terms: list[list[list[tuple[tuple[int, ...], int]]]]
    with_forms: bool

    def boundary(self, key: PdKey) -> list[tuple[PdKey, int]]:
        """d = d_Koszul + (-1)^|e| nabla, terms of Hodge weight >= N dropped."""
        koszul, alpha, pd, wedge = key
        hodge = sum(pd) + len(wedge)
        out = []
        for t, j in enumerate(koszul):
            sign = -1 if t % 2 else 1
            rest = koszul[:t] + koszul[t + 1:]
            if hodge + 1 < self.N:
                out.append(((rest, alpha, _bump(pd, j, 1), wedge), sign * (pd[j] + 1)))
            for beta, coeff in self.relation_terms[j]:
                out.append(((rest, _added(alpha, beta), pd, wedge), -sign * coeff))
        if not self.with_forms:
            return out
        outer = -1 if len(koszul) % 2 else 1
        for k in range(self.n):
            wedged = wedge_sign(k, wedge)
            if wedged is None:
                continue
            sign, new_wedge = wedged
            if alpha[k] and hodge + 1 < self.N:
                out.append(((koszul, _bump(alpha, k, -1), pd, new_wedge), outer * sign * alpha[k]))
            for j, a in enumerate(pd):
                if a == 0:
                    continue
                for beta, coeff in self.jacobian_terms[j][k]:
                    out.append(((koszul, _added(alpha, beta), _bump(pd, j, -1), new_wedge), outer * sign * coeff))
        return out


def _pd_koszul_complex(
    p: AlgebraPresentation,
    N: int,
    poly_weights: Sequence[int],
    with_forms: bool,
    degree_cutoff: Optional[int] = None,
) -> WeightedComplex:
    """
    The Koszul model of D_R(I) (or of D_R(I) (x) Omega^*_R when ``with_forms``)
    modulo Hodge weight N on the requested polynomial weights. The filtration
    weight of e_S x^alpha gamma_a dx_I is |a| (+ |I| with forms); homological
    degree is |S| - |I|. Degrees above degree_cutoff + 1 are not built.
    """
    degrees = _relation_degrees(p)
    n = len(p.variables)
    data = _PdKoszulData(
        n,
        N,
        [_terms(f, p.symbols) for f in p.relations],
        [[_terms(df, p.symbols) for df in row] for row in p.jacobian()],
        with_forms,
    )
    top = (settings.default_degree_cutoff if degree_cutoff is None else degree_cutoff) + 1
    bases: dict[int, list[PdKey]] = {}
    for w in sorted(set(poly_weights)):
        for key in _pd_basis(n, degrees, N, w, with_forms):
            degree = len(key[0]) - len(key[3])
            if degree <= top:
                bases.setdefault(degree, []).append(key)
    index = {d: {key: k for k, key in enumerate(keys)} for d, keys in bases.items()}
    diffs = {}
    for d, keys in bases.items():
        if d - 1 not in bases:
            continue
        below = index[d - 1]
        items = [
            (below[image], col, coeff)
            for col, key in enumerate(keys)
            for image, coeff in data.boundary(key)
        ]
        diffs[d] = Matrix.from_sparse(p.ring, len(bases[d - 1]), len(keys), items)
    complex_ = ChainComplex(p.ring, {d: len(keys) for d, keys in bases.items()}, diffs)
    weights = {
        d: tuple(sum(pd) + (len(wedge) if with_forms else 0) for _, _, pd, wedge in keys)
        for d, keys in bases.items()
    }
    engine_log(
        f"pd Koszul model of {p.describe()}, N={N}, forms={with_forms}: ranks {dict(complex_.ranks)}",
        logging.DEBUG,
    )
    return WeightedComplex(complex_, weights)


def pd_envelope_stub(
    p: AlgebraPresentation, N: int, poly_weights: Optional[Sequence[int]] = None
) -> PdAlgebraStub:
    """
    D_R(I) modulo the N-th divided power of I. Over Z with variables the
    levels are summed over ``poly_weights``.
    """
    p.require_regularity("regseq")
    if N < 1:
        raise InputError("a stub needs N >= 1")
    if p.ring.kind == "Fp":
        raise UnsupportedPresentationError("pd envelopes need a base flat over Z")
    c = p.constant_quotient()
    if c is not None and p.ring.kind == "Z":
        if c == 0 or abs(c) == 1:
            raise UnsupportedPresentationError(f"{p.describe()} is not a regular quotient")
        c = abs(c)
        levels = [_pd_level(c, N, s) for s in range(N)]
        transitions = []
        for s in range(N - 1):
            upper, lower = levels[s + 1], levels[s]
            shift_in = Matrix.from_sparse(ZZ, N - s, N - s - 1, ((k + 1, k, 1) for k in range(N - s - 1)))
            transitions.append(ChainMap(upper, lower, {0: shift_in, 1: shift_in}))
        stub = FilteredStub(N, tuple(levels), tuple(transitions))
        engine_log(f"pd envelope of {p.describe()} through pd-weight {N - 1}", logging.DEBUG)
        return PdAlgebraStub(p, N, stub, c)
    if p.ring.kind == "Q" and p.variables:
        return PdAlgebraStub(p, N, infinitesimal_stub(p, N))
    if p.ring.kind == "Z" and p.variables:
        weighted = _pd_koszul_complex(p, N, poly_weights or default_poly_weights(), with_forms=False)
        return PdAlgebraStub(p, N, weighted.to_stub(N))
    raise UnsupportedPresentationError(
        f"pd envelope of {p.describe()} is only built for Z/(c), over Z[x] or over Q"
    )


# de Rham


def _polynomial_de_rham(p: AlgebraPresentation, N: int, poly_weights: Sequence[int]) -> FilteredStub:
    """Omega^* by polynomial weight, form degree i in homological degree -i, Hodge weight i."""
    ring, n = p.ring, len(p.variables)
    ranks = {-i: sum(len(form_basis(n, i, w)) for w in poly_weights) for i in range(n + 1)}
    diffs = {}
    for i in range(n):
        block = Matrix.zeros(ring, 0, 0)
        for w in poly_weights:
            block = block.direct_sum(de_rham_matrix(ring, n, i, w))
        diffs[-i] = block
    forms = ChainComplex(ring, ranks, diffs)
    weighted = WeightedComplex(forms, {d: (-d,) * r for d, r in forms.ranks.items()})
    return weighted.to_stub(N)


def _completed_de_rham(p: AlgebraPresentation, N: int) -> FilteredStub:
    """
    Over Q: F^s/F^N = [I^s/I^N -> I^{s-1}/I^{N-1} dx -> ...] inside
    (R/I^{N-i}) (x) Λ^i in form degree i.
    """
    ring, n = p.ring, len(p.variables)
    top = min(n, N - 1)
    filtrations = {i: iadic_filtration(ring, p.symbols, p.relations, N - i) for i in range(top + 1)}
    wedges = {i: list(combinations(range(n), i)) for i in range(top + 2)}
    ranks = {-i: filtrations[i].algebra.dim * len(wedges[i]) for i in range(top + 1)}
    diffs = {}
    for i in range(top):
        src, tgt = filtrations[i].algebra, filtrations[i + 1].algebra
        tgt_index = {w: k for k, w in enumerate(wedges[i + 1])}
        items = []
        for wi, wedge in enumerate(wedges[i]):
            for k in range(src.dim):
                mono = src.monomial(k)
                col = wi * src.dim + k
                for m, x in enumerate(p.symbols):
                    wedged = wedge_sign(m, wedge)
                    if wedged is None:
                        continue
                    sign, new_wedge = wedged
                    coords = tgt.element_of(sympy.diff(mono, x))
                    base = tgt_index[new_wedge] * tgt.dim
                    items.extend((base + r, col, sign * v) for r, v in enumerate(coords) if v != 0)
        diffs[-i] = Matrix.from_sparse(ring, ranks[-i - 1], ranks[-i], items)
    total = ChainComplex(ring, ranks, diffs)

    def spans(s: int) -> dict[int, Matrix]:
        return {
            -i: Matrix.identity(ring, len(wedges[i])).kron(filtrations[i].bases[max(s - i, 0)])
            for i in range(top + 1)
        }

    pieces = [subcomplex(total, spans(s)) for s in range(N + 1)]
    complexes = [c for c, _ in pieces]
    inclusions = []
    for s in range(N):
        (upper, up_map), (lower, low_map) = pieces[s + 1], pieces[s]
        comps = {d: solve(low_map.f(d), up_map.f(d)) for d in upper.ranks}
        inclusions.append(ChainMap(upper, lower, comps))
    return FilteredStub.from_filtration(complexes, inclusions)


def derham_stub(
    p: AlgebraPresentation,
    N: int,
    poly_weights: Optional[Sequence[int]] = None,
    degree_cutoff: Optional[int] = None,
) -> FilteredStub:
    """
    Hodge-filtered derived de Rham complex modulo F^N. Levels reaching above
    ``degree_cutoff`` are marked truncated there.
    """
    p.require_regularity("smooth", "regseq")
    if N < 1:
        raise InputError("a stub needs N >= 1")
    cutoff = settings.default_degree_cutoff if degree_cutoff is None else degree_cutoff
    if cutoff < 0:
        raise InputError("degree_cutoff must be nonnegative")
    weights = poly_weights or default_poly_weights()
    if p.is_polynomial_ring:
        stub = _polynomial_de_rham(p, N, weights)
    elif not p.variables:
        stub = pd_envelope_stub(p, N).stub
    elif p.ring.kind == "Q":
        stub = _completed_de_rham(p, N)
    elif p.ring.kind == "Z":
        stub = _pd_koszul_complex(p, N, weights, with_forms=True, degree_cutoff=cutoff).to_stub(N)
    else:
        raise UnsupportedPresentationError(
            f"de Rham stub of {p.describe()}: quotients with variables need a base flat over Z"
        )
    if stub.levels[0].hi > cutoff:
        stub = stub.with_truncation(cutoff)
    engine_log(f"de Rham stub of {p.describe()}, N={N}, strict={stub.strict}", logging.INFO)
    return stub


# free crystalline stubs


def free_crystalline_summands(i: int, p_rank: int, N: int) -> list[tuple[int, ChainComplex]]:
    """(weight i*r, LSym^r(P[2i])[-2ir]) for i*r <= N."""
    if i < 1:
        raise InputError("free crystalline stubs need i >= 1")
    if p_rank < 0 or N < 0:
        raise InputError("rank and N must be nonnegative")
    free = ChainComplex.concentrated(ZZ, 2 * i, p_rank)
    out = []
    for r in range(N // i + 1):
        power = derived_power(PowerFunctorKind("sym", r), free, 2 * i * r)
        out.append((i * r, shift(power, -2 * i * r)))
    return out


def free_crystalline_stub(i: int, p_rank: int, N: int) -> FilteredStub:
    """sum over i*r <= N of ins^{ir}(LSym^r(P[2i])[-2ir]), as an (N+1)-stub."""
    summands = free_crystalline_summands(i, p_rank, N)
    for weight, c in summands:
        table = homology(c)
        if any(d > 0 and not m.is_zero for d, m in table.entries.items()):  # pragma: no cover
            raise PreconditionError(f"summand of weight {weight} is not coconnective")
    return stub_direct_sum(*(ins_stub(weight, c, N + 1) for weight, c in summands))


# crystallization


@dataclass(frozen=True)
class CrystallizationComparison:
    """x^{(s)} -> s! gamma_s from Sym^s Q to Γ^s Q, k-linearly."""

    s: int
    source: ChainComplex
    target: ChainComplex
    map: ChainMap
    matrix: Matrix
    cokernel: FgModule

    @property
    def is_iso(self) -> bool:
        m = self.matrix
        return m.rows == m.cols and self.cokernel.is_zero and rank(m) == m.cols

    @property
    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def to_payload(self) -> dict:
        return {
            "s": self.s,
            "matrix": self.matrix.to_payload(),
            "is_iso": self.is_iso,
            "is_zero": self.is_zero,
            "cokernel": self.cokernel.label,
        }


def crystallization_gr_compare(p: AlgebraPresentation, s: int) -> CrystallizationComparison:
    """gr^s comparison LSym^s(L[-1]) -> LΛ^s(L)[-s] for L = L_{S/R} = Q[1]."""
    if s < 0:
        raise InputError("s must be nonnegative")
    p.require_regularity("regseq")
    data = cotangent_complex(p, relative=True).data
    if data is None or data.p_rank:
        raise UnsupportedPresentationError("the relative cotangent complex is not of the form Q[1]")
    alg, c = data.algebra, data.q_rank
    source = koszul_sym(s, KoszulInput(alg, c, 0, ((),) * c))
    target = shift(koszul_exterior(s, KoszulInput(alg, 0, c, ())), -s)
    factors = []
    for alpha in combinations_with_replacement(range(c), s):
        weight = 1
        for q in set(alpha):
            weight *= factorial(alpha.count(q))
        factors.extend([weight] * alg.dim)
    size = len(factors)
    matrix = Matrix.diagonal(alg.ring, factors, size, size)
    comparison = ChainMap(source, target, {0: matrix})
    result = CrystallizationComparison(s, source, target, comparison, matrix, cokernel(matrix))
    engine_log(f"crystallization gr^{s} of {p.describe()}: cokernel {result.cokernel.label}", logging.DEBUG)
    return result


def crystallization_stub_map(c: int, N: int) -> list[ChainMap]:
    """
    Levelwise maps from the c-adic stub of Z to the pd stub of Z/(c):
    c^s -> s! gamma_s in degree 0, lifted through xi - c in degree 1.
    The maps commute with the transitions only up to homotopy.
    """
    c = abs(int(c))
    source = ideal_power_stub(ZZ, [c] * N, N)
    maps = []
    for s in range(N):
        lower = _pd_level(c, N, s)
        zero_part = Matrix.from_sparse(ZZ, N - s, 1, [(0, 0, factorial(s))])
        rhs = zero_part.scale(c ** (N - s))
        lifted = solve(_pd_relation_matrix(c, N, s), rhs)
        if lifted is None:  # pragma: no cover - c^{N-s} s! gamma_s lies in (xi - c)
            raise PreconditionError(f"level {s} of the comparison does not lift")
        maps.append(ChainMap(source.levels[s], lower, {0: zero_part, 1: lifted}))
    return maps


def stub_map_gr_scalars(c: int, N: int) -> list[int]:
    """The scalar by which each level map acts on H_0(gr^s) = Z/(c)."""
    pd = pd_envelope_stub(AlgebraPresentation.parse("Z", [], [str(c)], "regseq"), N).stub
    maps = crystallization_stub_map(c, N)
    out = []
    for s, (g, f) in enumerate(zip(graded_pieces(pd), maps)):
        pres = homology_presentation(g, 0)
        size = g.rank(0)
        image = f.f(0).column(0) + (0,) * (size - (N - s))
        unit = (1,) + (0,) * (size - 1)
        order = pres.orders[0]
        generator = pres.class_of(unit)[0]
        value = pres.class_of(image)[0]
        out.append(int(value * sympy.mod_inverse(generator, order)) % order)
    return out
