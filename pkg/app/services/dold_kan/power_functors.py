"""
Power functors on free modules with monomial bases.

A monomial is a tuple of basis indices:
- sym, div: non-decreasing tuples (multisets); for div the multiplicity of an
  index is the divided-power exponent.
- ext: strictly increasing tuples.
- tensor: arbitrary tuples (ordered).
- antisym: non-decreasing tuples; this is the free cover of AntiSym^r, which has
  2-torsion on the tuples with a repeated index over Z.

The image of a monomial under a linear map is computed factor by factor with
the multiplication rule of the functor.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product
from math import comb
from typing import Any, Mapping, Sequence

from app.core.errors import InputError
from app.services.linalg import Matrix, RingSpec

FunctorName = str

_ALIASES = {
    "sym": "sym",
    "symmetric": "sym",
    "lsym": "sym",
    "ext": "ext",
    "exterior": "ext",
    "lambda": "ext",
    "wedge": "ext",
    "div": "div",
    "divided": "div",
    "gamma": "div",
    "antisym": "antisym",
    "anti": "antisym",
    "tensor": "tensor",
}

LinearImages = Mapping[int, Mapping[int, Any]]


@dataclass(frozen=True)
class PowerFunctorKind:
    kind: FunctorName
    weight: int

    def __post_init__(self) -> None:
        if self.kind not in ("sym", "ext", "div", "antisym", "tensor"):
            raise InputError(f"unknown power functor {self.kind!r}")
        if self.weight < 0:
            raise InputError("functor weight must be nonnegative")

    @classmethod
    def parse(cls, name: str, weight: int) -> "PowerFunctorKind":
        key = (name or "").strip().lower()
        if key not in _ALIASES:
            raise InputError(f"unknown power functor {name!r}; use sym|ext|div|antisym")
        return cls(_ALIASES[key], int(weight))

    @property
    def display(self) -> str:
        return {
            "sym": "Sym",
            "ext": "Λ",
            "div": "Γ",
            "antisym": "AntiSym",
            "tensor": "T",
        }[self.kind] + f"^{self.weight}"


def monomial_basis(kind: FunctorName, r: int, m: int) -> list[tuple[int, ...]]:
    if kind in ("sym", "div", "antisym"):
        return list(combinations_with_replacement(range(m), r))
    if kind == "ext":
        return list(combinations(range(m), r))
    if kind == "tensor":
        return list(product(range(m), repeat=r))
    raise InputError(f"unknown power functor {kind!r}")


def functor_rank(kind: FunctorName, r: int, m: int) -> int:
    if kind in ("sym", "div", "antisym"):
        return comb(m + r - 1, r) if m else int(r == 0)
    if kind == "ext":
        return comb(m, r)
    return m ** r


def stable_sort_sign(t: Sequence[int]) -> int:
    """Sign of the permutation that stably sorts t (ties are not inversions)."""
    inversions = 0
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            if t[i] > t[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def _clean(ring: RingSpec, acc: dict) -> dict:
    out = {}
    for key, value in acc.items():
        value = ring.reduce(value)
        if value != 0:
            out[key] = value
    return out


def _image_sym(ring, monomial, images) -> dict:
    acc: dict[tuple, Any] = {(): ring.one}
    for i in monomial:
        nxt: dict[tuple, Any] = {}
        for mono, c in acc.items():
            for j, a in images.get(i, {}).items():
                pos = bisect_right(mono, j)
                key = mono[:pos] + (j,) + mono[pos:]
                nxt[key] = nxt.get(key, 0) + c * a
        acc = _clean(ring, nxt)
        if not acc:
            break
    return acc


def _image_ext(ring, monomial, images) -> dict:
    acc: dict[tuple, Any] = {(): ring.one}
    for i in monomial:
        nxt: dict[tuple, Any] = {}
        for mono, c in acc.items():
            for j, a in images.get(i, {}).items():
                pos = bisect_right(mono, j)
                if pos and mono[pos - 1] == j:
                    continue
                # moving the new factor from the end past len(mono) - pos factors
                sign = -1 if (len(mono) - pos) % 2 else 1
                key = mono[:pos] + (j,) + mono[pos:]
                nxt[key] = nxt.get(key, 0) + sign * c * a
        acc = _clean(ring, nxt)
        if not acc:
            break
    return acc


def _image_tensor(ring, monomial, images) -> dict:
    acc: dict[tuple, Any] = {(): ring.one}
    for i in monomial:
        nxt: dict[tuple, Any] = {}
        for mono, c in acc.items():
            for j, a in images.get(i, {}).items():
                key = mono + (j,)
                nxt[key] = nxt.get(key, 0) + c * a
        acc = _clean(ring, nxt)
        if not acc:
            break
    return acc


def _divided_power_of_sum(ring, exponent: int, image: Mapping[int, Any]) -> dict:
    """gamma_a(sum c_j y_j) = sum over |alpha| = a of prod c_j^alpha_j gamma_alpha_j(y_j)."""
    items = sorted(image.items())
    out: dict[tuple, Any] = {}

    def rec(pos: int, left: int, key: tuple, coeff: Any) -> None:
        j, c = items[pos]
        if pos == len(items) - 1:
            full = key + (j,) * left
            out[full] = out.get(full, 0) + coeff * c ** left
            return
        for a in range(left, -1, -1):
            rec(pos + 1, left - a, key + (j,) * a, coeff * c ** a)

    if not items:
        return {(): ring.one} if exponent == 0 else {}
    rec(0, exponent, (), ring.one)
    return _clean(ring, out)


def _multiply_divided(a: tuple, b: tuple) -> tuple[tuple, int]:
    """gamma-monomial product: prod over indices of C(u+v, u)."""
    merged = tuple(sorted(a + b))
    coeff = 1
    for j in set(b):
        u, v = a.count(j), b.count(j)
        if u:
            coeff *= comb(u + v, u)
    return merged, coeff


def _image_div(ring, monomial, images) -> dict:
    acc: dict[tuple, Any] = {(): ring.one}
    exponents: dict[int, int] = {}
    for i in monomial:
        exponents[i] = exponents.get(i, 0) + 1
    for i, a in exponents.items():
        piece = _divided_power_of_sum(ring, a, images.get(i, {}))
        nxt: dict[tuple, Any] = {}
        for mono, c in acc.items():
            for key2, c2 in piece.items():
                key, mult = _multiply_divided(mono, key2)
                nxt[key] = nxt.get(key, 0) + c * c2 * mult
        acc = _clean(ring, nxt)
        if not acc:
            break
    return acc


def _image_antisym(ring, monomial, images) -> dict:
    out: dict[tuple, Any] = {}
    for key, c in _image_tensor(ring, monomial, images).items():
        sorted_key = tuple(sorted(key))
        out[sorted_key] = out.get(sorted_key, 0) + stable_sort_sign(key) * c
    return _clean(ring, out)


_IMAGE = {
    "sym": _image_sym,
    "ext": _image_ext,
    "div": _image_div,
    "tensor": _image_tensor,
    "antisym": _image_antisym,
}


def image_of_monomial(
    ring: RingSpec, kind: FunctorName, monomial: tuple[int, ...], images: LinearImages
) -> dict[tuple[int, ...], Any]:
    """F(f)(monomial) where images[i] = {j: coefficient} is f applied to basis vector i."""
    return _IMAGE[kind](ring, monomial, images)


def column_images(m: Matrix) -> dict[int, dict[int, Any]]:
    out: dict[int, dict[int, Any]] = {j: {} for j in range(m.cols)}
    for i, j, v in m.nonzero_items():
        out[j][i] = v
    return out


def power_on_free(kind: PowerFunctorKind, m: Matrix) -> Matrix:
    """
    The induced map F^r(m) on monomial bases.

    For antisym the result is a lift to the free cover on non-decreasing tuples;
    it is well defined modulo twice the tuples with a repeated index.
    """
    ring = m.ring
    src = monomial_basis(kind.kind, kind.weight, m.cols)
    tgt = monomial_basis(kind.kind, kind.weight, m.rows)
    index = {mono: k for k, mono in enumerate(tgt)}
    images = column_images(m)
    items = []
    for col, mono in enumerate(src):
        for key, value in image_of_monomial(ring, kind.kind, mono, images).items():
            items.append((index[key], col, value))
    return Matrix.from_sparse(ring, len(tgt), len(src), items)


