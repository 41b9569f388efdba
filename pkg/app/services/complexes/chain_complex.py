from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from app.core.errors import (
    InputError,
    InvalidChainMapError,
    InvalidComplexError,
    RingMismatchError,
)
from app.services.linalg import Matrix, RingSpec, left_inverse


@dataclass(frozen=True)
class ChainComplex:
    """
    Bounded chain complex of finitely generated free modules.

    Homological grading: ``differentials[i]`` is the matrix of d_i from degree i
    to degree i-1. Zero ranks are dropped and a (possibly zero) differential is
    stored for every pair of adjacent nonzero degrees, so two complexes compare
    equal exactly when ranks and matrices agree. d^2 = 0 is checked on
    construction.
    """

    ring: RingSpec
    ranks: Mapping[int, int]
    differentials: Mapping[int, Matrix] = field(default_factory=dict)
    # degree above which a derived functor was not computed; None = exact
    truncated_above: Optional[int] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        ranks = {int(i): int(r) for i, r in sorted(self.ranks.items()) if int(r) != 0}
        if any(r < 0 for r in ranks.values()):
            raise InvalidComplexError("ranks must be nonnegative")
        diffs: dict[int, Matrix] = {}
        for i, mat in self.differentials.items():
            i = int(i)
            if mat.ring != self.ring:
                raise RingMismatchError(f"d_{i} is over {mat.ring}, complex over {self.ring}")
            expected = (ranks.get(i - 1, 0), ranks.get(i, 0))
            if mat.shape != expected:
                raise InvalidComplexError(f"d_{i} has shape {mat.shape}, expected {expected}")
        for i in ranks:
            if i - 1 in ranks:
                mat = self.differentials.get(i)
                diffs[i] = mat if mat is not None else Matrix.zeros(self.ring, ranks[i - 1], ranks[i])
        for i in diffs:
            if i - 1 in diffs:
                if not (diffs[i - 1] @ diffs[i]).is_zero():
                    raise InvalidComplexError(f"d_{i - 1} o d_{i} is not zero")
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "differentials", dict(sorted(diffs.items())))

    # constructors

    @classmethod
    def zero(cls, ring: RingSpec) -> "ChainComplex":
        return cls(ring, {})

    @classmethod
    def concentrated(cls, ring: RingSpec, degree: int = 0, rank: int = 1) -> "ChainComplex":
        """The free module of the given rank sitting in one degree."""
        return cls(ring, {degree: rank})

    @classmethod
    def two_term(cls, matrix: Matrix, top_degree: int = 1) -> "ChainComplex":
        """[C_top --matrix--> C_{top-1}]"""
        return cls(
            matrix.ring,
            {top_degree: matrix.cols, top_degree - 1: matrix.rows},
            {top_degree: matrix},
        )

    # access

    def rank(self, i: int) -> int:
        return self.ranks.get(i, 0)

    def d(self, i: int) -> Matrix:
        mat = self.differentials.get(i)
        if mat is None:
            return Matrix.zeros(self.ring, self.rank(i - 1), self.rank(i))
        return mat

    @property
    def degrees(self) -> list[int]:
        return list(self.ranks)

    @property
    def lo(self) -> int:
        return min(self.ranks) if self.ranks else 0

    @property
    def hi(self) -> int:
        return max(self.ranks) if self.ranks else -1

    @property
    def is_zero(self) -> bool:
        return not self.ranks

    @property
    def is_connective(self) -> bool:
        return self.lo >= 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** (i % 2) * r for i, r in self.ranks.items())

    def with_truncation(self, truncated_above: Optional[int]) -> "ChainComplex":
        return ChainComplex(self.ring, self.ranks, self.differentials, truncated_above)

    # wire format

    def to_payload(self) -> dict:
        payload: dict[str, Any] = {
            "ring": self.ring.label,
            "ranks": {str(i): r for i, r in self.ranks.items()},
            "d": {
                str(i): m.to_payload() for i, m in self.differentials.items() if not m.is_zero()
            },
        }
        if self.truncated_above is not None:
            payload["truncated_above"] = self.truncated_above
        return payload

    @classmethod
    def from_payload(cls, payload: dict) -> "ChainComplex":
        try:
            ring = RingSpec.parse(payload["ring"])
            ranks = {int(k): int(v) for k, v in payload.get("ranks", {}).items()}
            raw = payload.get("d", {}) or {}
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InputError(f"malformed complex payload: {exc}") from exc
        diffs = {}
        for k, m in raw.items():
            mat = Matrix.from_payload({"ring": ring.label, **m}) if "ring" not in m else Matrix.from_payload(m)
            diffs[int(k)] = mat
        return cls(ring, ranks, diffs, payload.get("truncated_above"))

    def __repr__(self) -> str:
        body = ", ".join(f"{i}:{r}" for i, r in self.ranks.items())
        return f"ChainComplex<{self.ring.display} {{{body}}}>"


@dataclass(frozen=True)
class ChainMap:
    """Degree-preserving map of complexes; commutation is checked on construction."""

    source: ChainComplex
    target: ChainComplex
    components: Mapping[int, Matrix] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.source.ring != self.target.ring:
            raise RingMismatchError(f"{self.source.ring} vs {self.target.ring}")
        comps: dict[int, Matrix] = {}
        for i, mat in self.components.items():
            i = int(i)
            expected = (self.target.rank(i), self.source.rank(i))
            if mat.shape != expected:
                raise InvalidChainMapError(f"f_{i} has shape {mat.shape}, expected {expected}")
            if mat.ring != self.source.ring:
                raise RingMismatchError(f"f_{i} is over {mat.ring}")
            if expected[0] and expected[1]:
                comps[i] = mat
        object.__setattr__(self, "components", dict(sorted(comps.items())))
        degrees = set(self.source.ranks) | set(self.target.ranks)
        for i in degrees:
            left = self.target.d(i) @ self.f(i)
            right = self.f(i - 1) @ self.source.d(i)
            if left != right:
                raise InvalidChainMapError(f"f does not commute with d in degree {i}")

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(c, c, {i: Matrix.identity(c.ring, r) for i, r in c.ranks.items()})

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> "ChainMap":
        return cls(source, target, {})

    def f(self, i: int) -> Matrix:
        mat = self.components.get(i)
        if mat is None:
            return Matrix.zeros(self.source.ring, self.target.rank(i), self.source.rank(i))
        return mat

    @property
    def ring(self) -> RingSpec:
        return self.source.ring

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other"""
        if other.target != self.source:
            raise InvalidChainMapError("composition of non-composable maps")
        degrees = set(other.source.ranks)
        return ChainMap(other.source, self.target, {i: self.f(i) @ other.f(i) for i in degrees})

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if self.source != other.source or self.target != other.target:
            raise InvalidChainMapError("sum of maps with different endpoints")
        degrees = set(self.source.ranks)
        return ChainMap(self.source, self.target, {i: self.f(i) + other.f(i) for i in degrees})

    def scale(self, c: Any) -> "ChainMap":
        return ChainMap(
            self.source, self.target, {i: m.scale(c) for i, m in self.components.items()}
        )

    def is_split_injective(self) -> bool:
        return all(
            left_inverse(self.f(i)) is not None for i in self.source.ranks
        )

    def to_payload(self) -> dict:
        return {
            "source": self.source.to_payload(),
            "target": self.target.to_payload(),
            "components": {str(i): m.to_payload() for i, m in self.components.items()},
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "ChainMap":
        try:
            source = ChainComplex.from_payload(payload["source"])
            target = ChainComplex.from_payload(payload["target"])
            comps = {int(k): Matrix.from_payload(v) for k, v in payload.get("components", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed chain map payload: {exc}") from exc
        return cls(source, target, comps)
