"""
N-stubs: nonnegative filtrations recorded in weights 0..N-1.

``levels[s]`` models F^s / F^N and ``transitions[s]`` is the map
levels[s+1] -> levels[s]. A stub is strict when every transition is
degreewise split injective; the strict ones are closed under the image-sum
Day tensor.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from app.core.errors import InputError, InvalidChainMapError, NonStrictStubError
from app.core.logging_config import engine_log
from app.services.complexes import (
    ChainComplex,
    ChainMap,
    cone,
    direct_sum,
    direct_sum_map,
    mapping_cylinder,
    tensor,
    tensor_maps,
    truncation_inclusion,
)
from app.services.filtered.graded import GradedComplex
from app.services.linalg import (
    Matrix,
    RingSpec,
    column_space_basis,
    complement_basis,
    left_inverse,
    solve,
)


@dataclass(frozen=True)
class FilteredStub:
    N: int
    levels: tuple[ChainComplex, ...]
    transitions: tuple[ChainMap, ...]
    strict: bool = field(init=False)

    def __post_init__(self) -> None:
        if self.N < 1:
            raise InputError("a stub needs N >= 1")
        if len(self.levels) != self.N or len(self.transitions) != self.N - 1:
            raise InputError(
                f"an {self.N}-stub has {self.N} levels and {self.N - 1} transitions"
            )
        ring = self.levels[0].ring
        for s, t in enumerate(self.transitions):
            if t.source != self.levels[s + 1] or t.target != self.levels[s]:
                raise InvalidChainMapError(f"transition {s} does not go F^{s + 1} -> F^{s}")
            if t.ring != ring:
                raise InvalidChainMapError(f"transition {s} is over {t.ring}")
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "strict", all(t.is_split_injective() for t in self.transitions))

    @property
    def ring(self) -> RingSpec:
        return self.levels[0].ring

    def level(self, s: int) -> ChainComplex:
        """F^s with F^s = F^0 for s < 0 and 0 for s >= N."""
        if s >= self.N:
            return ChainComplex.zero(self.ring)
        return self.levels[max(s, 0)]

    def inclusion_into_top(self, s: int) -> ChainMap:
        """The composite F^s -> F^0."""
        f = ChainMap.identity(self.levels[s])
        for k in range(s - 1, -1, -1):
            f = self.transitions[k].compose(f)
        return f

    def with_truncation(self, truncated_above: int) -> "FilteredStub":
        """Every level marked as computed only through degree ``truncated_above``."""
        levels = tuple(level.with_truncation(truncated_above) for level in self.levels)
        transitions = tuple(
            ChainMap(levels[s + 1], levels[s], t.components) for s, t in enumerate(self.transitions)
        )
        return FilteredStub(self.N, levels, transitions)

    def to_payload(self) -> dict:
        return {
            "N": self.N,
            "levels": [c.to_payload() for c in self.levels],
            "transitions": [t.to_payload() for t in self.transitions],
            "strict": self.strict,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "FilteredStub":
        try:
            levels = tuple(ChainComplex.from_payload(c) for c in payload["levels"])
            transitions = tuple(ChainMap.from_payload(t) for t in payload["transitions"])
            n = int(payload.get("N", len(levels)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed stub payload: {exc}") from exc
        stub = cls(n, levels, transitions)
        if payload.get("strict") and not stub.strict:
            raise NonStrictStubError("payload claims strictness but a transition does not split")
        return stub

    @classmethod
    def from_filtration(
        cls, complexes: Sequence[ChainComplex], inclusions: Sequence[ChainMap]
    ) -> "FilteredStub":
        """
        Stub of a filtration F^0 <- F^1 <- ... <- F^N given by injective maps.

        Level s is cone(F^N -> F^s), a free model of F^s / F^N, and the
        transitions are (inclusion, identity) on the cone summands.
        """
        n = len(complexes) - 1
        if n < 1 or len(inclusions) != n:
            raise InputError("from_filtration needs F^0..F^N and N inclusions")
        to_level = [ChainMap.identity(complexes[n])]
        for s in range(n - 1, -1, -1):
            to_level.insert(0, inclusions[s].compose(to_level[0]))
        bottom = complexes[n]
        levels = [cone(to_level[s]) for s in range(n)]
        transitions = []
        ring = bottom.ring
        for s in range(n - 1):
            comps = {
                d: inclusions[s].f(d).direct_sum(Matrix.identity(ring, bottom.rank(d - 1)))
                for d in set(levels[s + 1].ranks) | set(levels[s].ranks)
            }
            transitions.append(ChainMap(levels[s + 1], levels[s], comps))
        return cls(n, tuple(levels), tuple(transitions))


# constructors


def _zero_map(source: ChainComplex, target: ChainComplex) -> ChainMap:
    return ChainMap.zero(source, target)


def ins_stub(i: int, c: ChainComplex, N: int) -> FilteredStub:
    """ins^i(c): c in filtration weights 0..i with identity transitions."""
    zero = ChainComplex.zero(c.ring)
    # weights >= N are quotiented away
    levels = tuple(c if s <= i < N else zero for s in range(N))
    transitions = tuple(
        ChainMap.identity(c) if s + 1 <= i < N else _zero_map(levels[s + 1], levels[s])
        for s in range(N - 1)
    )
    return FilteredStub(N, levels, transitions)


def unit_stub(ring: RingSpec, N: int) -> FilteredStub:
    return ins_stub(0, ChainComplex.concentrated(ring, 0), N)


def constant_stub(c: ChainComplex, N: int) -> FilteredStub:
    """c at every level; as an N-stub this is ins^{N-1}(c)."""
    return ins_stub(N - 1, c, N)


def ideal_power_stub(ring: RingSpec, generators: Sequence[int], N: int) -> FilteredStub:
    """
    (g^s) inside the base ring for s = 0..N where generators[s] is the
    index [g^s : g^{s+1}]; Z-rank one at every level.
    """
    complexes = [ChainComplex.concentrated(ring, 0) for _ in range(N + 1)]
    inclusions = [
        ChainMap(complexes[s + 1], complexes[s], {0: Matrix.scalar(ring, 1, generators[s])})
        for s in range(N)
    ]
    return FilteredStub.from_filtration(complexes, inclusions)


def padic_stub(p: int, N: int, ring: Optional[RingSpec] = None) -> FilteredStub:
    """p^s Z / p^N Z as [Z --p^(N-s)--> Z] in degrees [1, 0]."""
    ring = ring or RingSpec.integers()
    return ideal_power_stub(ring, [p] * N, N)


def stub_direct_sum(*stubs: FilteredStub) -> FilteredStub:
    if not stubs:
        raise InputError("stub_direct_sum needs at least one stub")
    n = stubs[0].N
    if any(f.N != n for f in stubs):
        raise InputError(f"stubs of different lengths: {[f.N for f in stubs]}")
    levels = tuple(direct_sum(*(f.levels[s] for f in stubs)) for s in range(n))
    transitions = tuple(
        direct_sum_map(*(f.transitions[s] for f in stubs)) for s in range(n - 1)
    )
    return FilteredStub(n, levels, transitions)


def postnikov_stub(c: ChainComplex, N: int) -> FilteredStub:
    """F^s = tau_{>=s} c on saturated kernels; strict by construction."""
    complexes = [truncation_inclusion(c, s).source for s in range(N + 1)]
    inclusions = []
    for s in range(N):
        upper = truncation_inclusion(c, s + 1)
        lower = truncation_inclusion(c, s)
        comps = {}
        for d in upper.source.ranks:
            lifted = solve(lower.f(d), upper.f(d))
            if lifted is None:  # pragma: no cover - tau_{>=s+1} sits inside tau_{>=s}
                raise InvalidChainMapError("truncations are not nested")
            comps[d] = lifted
        inclusions.append(ChainMap(upper.source, lower.source, comps))
    return FilteredStub.from_filtration(complexes, inclusions)


# strictness


@dataclass(frozen=True)
class SplitQuotient:
    """C / S for a degreewise split subcomplex, with a section of the projection."""

    complex: ChainComplex
    projection: ChainMap
    section: Mapping[int, Matrix]


def split_quotient(f: ChainMap) -> SplitQuotient:
    c = f.target
    ring = c.ring
    complements, projections = {}, {}
    for n, r in c.ranks.items():
        sub = f.f(n)
        k = complement_basis(sub)
        if k is None:
            raise NonStrictStubError(f"subcomplex is not split in degree {n}")
        full = sub.hstack(k)
        inv = left_inverse(full)
        complements[n] = k
        projections[n] = inv.select_rows(range(sub.cols, r))
    ranks = {n: k.cols for n, k in complements.items()}
    diffs = {}
    for n in ranks:
        if n - 1 in ranks:
            diffs[n] = projections[n - 1] @ c.d(n) @ complements[n]
    q = ChainComplex(ring, ranks, diffs)
    return SplitQuotient(q, ChainMap(c, q, projections), complements)


def strictify(f: FilteredStub) -> tuple[FilteredStub, list[ChainMap]]:
    """
    Replace transitions by mapping-cylinder inclusions, from the top level down.

    Returns the strict stub and the levelwise quasi-isomorphisms onto f.
    """
    levels = [None] * f.N
    to_original: list[Optional[ChainMap]] = [None] * f.N
    levels[-1] = f.levels[-1]
    to_original[-1] = ChainMap.identity(f.levels[-1])
    transitions: list[Optional[ChainMap]] = [None] * (f.N - 1)
    for s in range(f.N - 2, -1, -1):
        cyl = mapping_cylinder(f.transitions[s].compose(to_original[s + 1]))
        levels[s] = cyl.complex
        to_original[s] = cyl.projection
        transitions[s] = cyl.inclusion
    stub = FilteredStub(f.N, tuple(levels), tuple(transitions))
    return stub, to_original


def _span(ring: RingSpec, columns: list[Matrix], rows: int) -> Matrix:
    if not columns:
        return Matrix.zeros(ring, rows, 0)
    stacked = columns[0]
    for m in columns[1:]:
        stacked = stacked.hstack(m)
    return column_space_basis(stacked)


def subcomplex(t: ChainComplex, spans: Mapping[int, Matrix]) -> tuple[ChainComplex, ChainMap]:
    """The subcomplex of t spanned degreewise by the columns of spans[n], with its inclusion."""
    ring = t.ring
    ranks = {n: m.cols for n, m in spans.items()}
    diffs = {}
    for n, m in spans.items():
        if n - 1 in spans and m.cols and spans[n - 1].cols:
            lifted = solve(spans[n - 1], t.d(n) @ m)
            if lifted is None:
                raise NonStrictStubError(f"filtration is not a subcomplex in degree {n}")
            diffs[n] = lifted
    sub = ChainComplex(ring, ranks, diffs)
    return sub, ChainMap(sub, t, {n: m for n, m in spans.items()})


def day_tensor_stub(a: FilteredStub, b: FilteredStub, strictify_inputs: bool = False) -> FilteredStub:
    """
    Day convolution of two stubs, N = min(Na, Nb).

    For strict inputs level s is (sum over i + j = s of F^i a (x) F^j b)
    modulo the weight-N part, inside F^0 a (x) F^0 b. Non-strict inputs are
    refused unless ``strictify_inputs`` is set, in which case both sides are
    replaced by their mapping-cylinder models first.
    """
    if a.ring != b.ring:
        raise InvalidChainMapError(f"{a.ring} vs {b.ring}")
    if not (a.strict and b.strict):
        if not strictify_inputs:
            raise NonStrictStubError("Day tensor of non-strict stubs needs strictify_inputs=True")
        a = a if a.strict else strictify(a)[0]
        b = b if b.strict else strictify(b)[0]
    ring = a.ring
    n_out = min(a.N, b.N)
    top = tensor(a.levels[0], b.levels[0])
    inc_a = [a.inclusion_into_top(i) for i in range(a.N)]
    inc_b = [b.inclusion_into_top(j) for j in range(b.N)]
    images: dict[tuple[int, int], ChainMap] = {}
    for i in range(a.N):
        for j in range(b.N):
            if i + j <= n_out:
                images[(i, j)] = tensor_maps(inc_a[i], inc_b[j])

    subs = []
    for s in range(n_out + 1):
        spans = {}
        for d, r in top.ranks.items():
            cols = [f.f(d) for (i, j), f in images.items() if i + j == s and f.source.rank(d)]
            spans[d] = _span(ring, cols, r)
        subs.append(subcomplex(top, spans))

    bottom_sub, bottom_map = subs[n_out]
    quotients, lifts = [], []
    for s in range(n_out):
        sub, sub_map = subs[s]
        into = {}
        for d in bottom_sub.ranks:
            lifted = solve(sub_map.f(d), bottom_map.f(d))
            if lifted is None:
                raise NonStrictStubError("weight-N part is not inside a lower level")
            into[d] = lifted
        quotients.append(split_quotient(ChainMap(bottom_sub, sub, into)))
        lifts.append(sub_map)

    levels = tuple(q.complex for q in quotients)
    transitions = []
    for s in range(n_out - 1):
        upper_map, lower_map = lifts[s + 1], lifts[s]
        comps = {}
        for d in levels[s + 1].ranks:
            included = solve(lower_map.f(d), upper_map.f(d) @ quotients[s + 1].section[d])
            comps[d] = quotients[s].projection.f(d) @ included
        transitions.append(ChainMap(levels[s + 1], levels[s], comps))
    engine_log(
        f"Day tensor of {a.N}- and {b.N}-stubs: level ranks {[dict(c.ranks) for c in levels]}",
        logging.DEBUG,
    )
    return FilteredStub(n_out, levels, tuple(transitions))


# graded data


def graded_pieces(f: FilteredStub) -> list[ChainComplex]:
    """gr^s = cone(F^{s+1} -> F^s) for s < N-1 and gr^{N-1} = F^{N-1}."""
    return [cone(t) for t in f.transitions] + [f.levels[-1]]


def associated_graded(f: FilteredStub) -> GradedComplex:
    return GradedComplex(f.ring, dict(enumerate(graded_pieces(f))))


@dataclass(frozen=True)
class ReesModule:
    """
    The Rees object of a stub: weight s carries F^s and t: weight s+1 -> s is
    the transition (t has weight -1).
    """

    stub: FilteredStub

    @property
    def graded(self) -> GradedComplex:
        return GradedComplex(self.stub.ring, dict(enumerate(self.stub.levels)))

    def t(self, s: int) -> ChainMap:
        return self.stub.transitions[s]

    def cone_of_t(self) -> GradedComplex:
        """F^* (x)_{k[t]} k: cone of t in each weight, the top weight unchanged."""
        pieces = {s: cone(self.t(s)) for s in range(self.stub.N - 1)}
        pieces[self.stub.N - 1] = self.stub.levels[-1]
        return GradedComplex(self.stub.ring, pieces)


def rees(f: FilteredStub) -> ReesModule:
    return ReesModule(f)
