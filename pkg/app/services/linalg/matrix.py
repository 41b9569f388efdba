from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Optional, Sequence

from app.core.errors import InputError, PreconditionError, RingMismatchError
from app.services.linalg.rings import RingSpec


@dataclass(frozen=True)
class Matrix:
    """
    Immutable dense matrix over a RingSpec.

    Entries are stored row-major as a tuple of row tuples, each entry already
    reduced to its canonical representative. Shapes with zero rows or zero
    columns are legal and keep their other dimension.
    """

    ring: RingSpec
    rows: int
    cols: int
    entries: tuple[tuple[Any, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise InputError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise InputError(
                f"entries do not match shape {self.rows}x{self.cols}"
            )

    # constructors

    @classmethod
    def from_rows(
        cls,
        ring: RingSpec,
        rows: Sequence[Sequence[Any]],
        cols: Optional[int] = None,
    ) -> "Matrix":
        data = tuple(tuple(ring.reduce(x) for x in row) for row in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(ring, len(data), cols, data)

    @classmethod
    def from_columns(
        cls,
        ring: RingSpec,
        columns: Sequence[Sequence[Any]],
        rows: int,
    ) -> "Matrix":
        cols = len(columns)
        data = [[ring.zero] * cols for _ in range(rows)]
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise InputError("column length does not match row count")
            for i, x in enumerate(col):
                data[i][j] = ring.reduce(x)
        return cls(ring, rows, cols, tuple(tuple(r) for r in data))

    @classmethod
    def zeros(cls, ring: RingSpec, rows: int, cols: int) -> "Matrix":
        z = ring.zero
        return cls(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> "Matrix":
        return cls.scalar(ring, n, ring.one)

    @classmethod
    def scalar(cls, ring: RingSpec, n: int, value: Any) -> "Matrix":
        z, v = ring.zero, ring.reduce(value)
        return cls(
            ring, n, n, tuple(tuple(v if i == j else z for j in range(n)) for i in range(n))
        )

    @classmethod
    def diagonal(cls, ring: RingSpec, values: Sequence[Any], rows: int, cols: int) -> "Matrix":
        data = [[ring.zero] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            data[i][i] = ring.reduce(v)
        return cls(ring, rows, cols, tuple(tuple(r) for r in data))

    @classmethod
    def from_sparse(
        cls, ring: RingSpec, rows: int, cols: int, items: Iterable[tuple[int, int, Any]]
    ) -> "Matrix":
        """Build from (row, col, value) triples; repeated positions accumulate."""
        data = [[ring.zero] * cols for _ in range(rows)]
        for i, j, v in items:
            data[i][j] = ring.add(data[i][j], ring.reduce(v))
        return cls(ring, rows, cols, tuple(tuple(r) for r in data))

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> Any:
        i, j = key
        return self.entries[i][j]

    def column(self, j: int) -> tuple[Any, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[Any, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def row(self, i: int) -> tuple[Any, ...]:
        return self.entries[i]

    def to_lists(self) -> list[list[Any]]:
        return [list(r) for r in self.entries]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def nonzero_items(self) -> Iterable[tuple[int, int, Any]]:
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if x != 0:
                    yield i, j, x

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return Matrix(
            self.ring,
            len(row_idx),
            len(col_idx),
            tuple(tuple(self.entries[i][j] for j in col_idx) for i in row_idx),
        )

    def select_columns(self, col_idx: Sequence[int]) -> "Matrix":
        return self.submatrix(range(self.rows), col_idx)

    def select_rows(self, row_idx: Sequence[int]) -> "Matrix":
        return self.submatrix(row_idx, range(self.cols))

    # arithmetic

    def _same_ring(self, other: "Matrix") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_ring(other)
        if self.shape != other.shape:
            raise PreconditionError(f"cannot add {self.shape} and {other.shape}")
        add = self.ring.add
        return Matrix(
            self.ring,
            self.rows,
            self.cols,
            tuple(
                tuple(add(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def __neg__(self) -> "Matrix":
        neg = self.ring.neg
        return Matrix(
            self.ring, self.rows, self.cols, tuple(tuple(neg(a) for a in r) for r in self.entries)
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c: Any) -> "Matrix":
        c = self.ring.reduce(c)
        mul = self.ring.mul
        return Matrix(
            self.ring, self.rows, self.cols, tuple(tuple(mul(c, a) for a in r) for r in self.entries)
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_ring(other)
        if self.cols != other.rows:
            raise PreconditionError(f"cannot multiply {self.shape} by {other.shape}")
        ring = self.ring
        n = other.cols
        sparse_rows = [[(j, b) for j, b in enumerate(r) if b != 0] for r in other.entries]
        out = []
        for row in self.entries:
            acc = [ring.zero] * n
            for k, a in enumerate(row):
                if a == 0:
                    continue
                for j, b in sparse_rows[k]:
                    acc[j] += a * b
            if ring.kind == "Fp":
                acc = [x % ring.p for x in acc]
            out.append(tuple(acc))
        return Matrix(ring, self.rows, n, tuple(out))

    def apply(self, vector: Sequence[Any]) -> tuple[Any, ...]:
        """Multiply by a column vector given as a sequence."""
        if len(vector) != self.cols:
            raise PreconditionError("vector length does not match column count")
        ring = self.ring
        out = []
        for row in self.entries:
            acc = ring.zero
            for a, x in zip(row, vector):
                if a != 0 and x != 0:
                    acc += a * x
            out.append(ring.reduce(acc))
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.ring,
            self.cols,
            self.rows,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
        )

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def change_ring(self, target: RingSpec) -> "Matrix":
        if target == self.ring:
            return self
        if self.ring.kind != "Z":
            raise RingMismatchError(f"base change is only defined from Z, not {self.ring}")
        return Matrix.from_rows(target, self.entries, self.cols)

    # block constructions

    def hstack(self, other: "Matrix") -> "Matrix":
        self._same_ring(other)
        if self.rows != other.rows:
            raise PreconditionError("hstack needs equal row counts")
        return Matrix(
            self.ring,
            self.rows,
            self.cols + other.cols,
            tuple(a + b for a, b in zip(self.entries, other.entries)),
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        self._same_ring(other)
        if self.cols != other.cols:
            raise PreconditionError("vstack needs equal column counts")
        return Matrix(self.ring, self.rows + other.rows, self.cols, self.entries + other.entries)

    def direct_sum(self, other: "Matrix") -> "Matrix":
        self._same_ring(other)
        z = self.ring.zero
        top = tuple(r + (z,) * other.cols for r in self.entries)
        bottom = tuple((z,) * self.cols + r for r in other.entries)
        return Matrix(self.ring, self.rows + other.rows, self.cols + other.cols, top + bottom)

    def kron(self, other: "Matrix") -> "Matrix":
        self._same_ring(other)
        mul = self.ring.mul
        data = []
        for ra in self.entries:
            for rb in other.entries:
                data.append(tuple(mul(a, b) for a in ra for b in rb))
        return Matrix(self.ring, self.rows * other.rows, self.cols * other.cols, tuple(data))

    # wire format

    def to_payload(self) -> dict:
        return {
            "ring": self.ring.label,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[self.ring.to_text(x) for x in r] for r in self.entries],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "Matrix":
        try:
            ring = RingSpec.parse(payload["ring"])
            rows = int(payload["rows"])
            cols = int(payload["cols"])
            entries = payload.get("entries", [])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed matrix payload: {exc}") from exc
        data = [[ring.from_text(x) for x in r] for r in entries]
        if len(data) != rows or any(len(r) != cols for r in data):
            raise InputError(f"matrix payload entries do not match {rows}x{cols}")
        return cls(ring, rows, cols, tuple(tuple(r) for r in data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"Matrix<{self.ring.display} {self.rows}x{self.cols}>[{body}]"


def block_matrix(ring: RingSpec, blocks: Sequence[Sequence[Optional[Matrix]]],
                 row_sizes: Sequence[int], col_sizes: Sequence[int]) -> Matrix:
    """Assemble a block matrix; ``None`` blocks are zero."""
    data = [[ring.zero] * sum(col_sizes) for _ in range(sum(row_sizes))]
    r0 = 0
    for bi, rs in enumerate(row_sizes):
        c0 = 0
        for bj, cs in enumerate(col_sizes):
            blk = blocks[bi][bj]
            if blk is not None:
                if blk.shape != (rs, cs):
                    raise PreconditionError(
                        f"block ({bi},{bj}) has shape {blk.shape}, expected {(rs, cs)}"
                    )
                for i, j, v in blk.nonzero_items():
                    data[r0 + i][c0 + j] = v
            c0 += cs
        r0 += rs
    return Matrix(ring, sum(row_sizes), sum(col_sizes), tuple(tuple(r) for r in data))
