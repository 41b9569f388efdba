"""
Normal forms with explicit unimodular transforms.

The elimination routines work on plain lists of lists and record every row and
column operation on both the transform and its inverse, so callers get
``u, u_inv, v, v_inv`` without a separate inversion. Pivots minimize the
absolute value over Z; over fields any nonzero entry is a unit pivot.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Optional

from app.core.errors import PreconditionError, RingMismatchError
from app.services.linalg.matrix import Matrix
from app.services.linalg.rings import RingSpec
from app.services.linalg.sparse import invariant_factors

logger = logging.getLogger("engine")


def _identity_lists(ring: RingSpec, n: int) -> list[list[Any]]:
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def _freeze(ring: RingSpec, data: list[list[Any]], rows: int, cols: int) -> Matrix:
    return Matrix(ring, rows, cols, tuple(tuple(r) for r in data))


class _Elimination:
    """Mutable state D = U M V with U, U^-1, V, V^-1 kept in sync."""

    def __init__(self, m: Matrix, track: bool = True):
        self.ring = m.ring
        self.rows, self.cols = m.rows, m.cols
        self.d = m.to_lists()
        self.track = track
        if track:
            self.u = _identity_lists(m.ring, m.rows)
            self.ui = _identity_lists(m.ring, m.rows)
            self.v = _identity_lists(m.ring, m.cols)
            self.vi = _identity_lists(m.ring, m.cols)

    # row operations: D <- E D, U <- E U, U^-1 <- U^-1 E^-1

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.d[i], self.d[j] = self.d[j], self.d[i]
        if self.track:
            self.u[i], self.u[j] = self.u[j], self.u[i]
            for row in self.ui:
                row[i], row[j] = row[j], row[i]

    def add_row(self, target: int, source: int, c: Any) -> None:
        """row_target += c * row_source"""
        if c == 0:
            return
        r = self.ring
        dt, ds = self.d[target], self.d[source]
        for k in range(self.cols):
            if ds[k] != 0:
                dt[k] = r.add(dt[k], r.mul(c, ds[k]))
        if self.track:
            ut, us = self.u[target], self.u[source]
            for k in range(self.rows):
                if us[k] != 0:
                    ut[k] = r.add(ut[k], r.mul(c, us[k]))
            for row in self.ui:
                if row[target] != 0:
                    row[source] = r.sub(row[source], r.mul(c, row[target]))

    def scale_row(self, i: int, unit: Any) -> None:
        r = self.ring
        self.d[i] = [r.mul(unit, x) for x in self.d[i]]
        if self.track:
            self.u[i] = [r.mul(unit, x) for x in self.u[i]]
            inv = r.inverse(unit)
            for row in self.ui:
                row[i] = r.mul(row[i], inv)

    # column operations: D <- D F, V <- V F, V^-1 <- F^-1 V^-1

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in self.d:
            row[i], row[j] = row[j], row[i]
        if self.track:
            for row in self.v:
                row[i], row[j] = row[j], row[i]
            self.vi[i], self.vi[j] = self.vi[j], self.vi[i]

    def add_col(self, target: int, source: int, c: Any) -> None:
        """col_target += c * col_source"""
        if c == 0:
            return
        r = self.ring
        for row in self.d:
            if row[source] != 0:
                row[target] = r.add(row[target], r.mul(c, row[source]))
        if self.track:
            for row in self.v:
                if row[source] != 0:
                    row[target] = r.add(row[target], r.mul(c, row[source]))
            vs, vt = self.vi[source], self.vi[target]
            for k in range(self.cols):
                if vt[k] != 0:
                    vs[k] = r.sub(vs[k], r.mul(c, vt[k]))

    def scale_col(self, j: int, unit: Any) -> None:
        r = self.ring
        for row in self.d:
            row[j] = r.mul(row[j], unit)
        if self.track:
            for row in self.v:
                row[j] = r.mul(row[j], unit)
            inv = r.inverse(unit)
            self.vi[j] = [r.mul(inv, x) for x in self.vi[j]]

    def min_pivot(self, t: int) -> Optional[tuple[int, int]]:
        size = self.ring.size
        best, best_size = None, None
        for i in range(t, self.rows):
            row = self.d[i]
            for j in range(t, self.cols):
                x = row[j]
                if x != 0:
                    s = size(x)
                    if best_size is None or s < best_size:
                        best, best_size = (i, j), s
                        if s == 1:
                            return best
        return best


@dataclass(frozen=True)
class Diagonalization:
    """u @ m @ v == d, with u_inv, v_inv the inverses of u, v."""

    u: Matrix
    u_inv: Matrix
    d: Matrix
    v: Matrix
    v_inv: Matrix
    rank: int

    @property
    def diagonal(self) -> list[Any]:
        return [self.d[i, i] for i in range(self.rank)]


def diagonalize(m: Matrix) -> Diagonalization:
    """Smith normal form over Z, reduced row/column form over a field."""
    ring = m.ring
    st = _Elimination(m)
    t = 0
    limit = min(m.rows, m.cols)
    while t < limit:
        pos = st.min_pivot(t)
        if pos is None:
            break
        st.swap_rows(t, pos[0])
        st.swap_cols(t, pos[1])
        while True:
            pivot = st.d[t][t]
            clean = True
            for i in range(t + 1, st.rows):
                x = st.d[i][t]
                if x != 0:
                    st.add_row(i, t, ring.neg(ring.quotient(x, pivot)))
                    if st.d[i][t] != 0:
                        clean = False
            for j in range(t + 1, st.cols):
                x = st.d[t][j]
                if x != 0:
                    st.add_col(j, t, ring.neg(ring.quotient(x, pivot)))
                    if st.d[t][j] != 0:
                        clean = False
            if not clean:
                # a remainder smaller than the pivot survived: move it in
                best, best_pos = ring.size(pivot), None
                for i in range(t + 1, st.rows):
                    x = st.d[i][t]
                    if x != 0 and ring.size(x) < best:
                        best, best_pos = ring.size(x), (i, t)
                for j in range(t + 1, st.cols):
                    x = st.d[t][j]
                    if x != 0 and ring.size(x) < best:
                        best, best_pos = ring.size(x), (t, j)
                if best_pos is not None:
                    st.swap_rows(t, best_pos[0])
                    st.swap_cols(t, best_pos[1])
                continue
            if ring.kind == "Z":
                bad = _find_non_multiple(st, t, pivot)
                if bad is not None:
                    st.add_row(t, bad, ring.one)
                    continue
            break
        _, unit = ring.normalize_associate(st.d[t][t])
        if unit != ring.one:
            st.scale_row(t, unit)
        t += 1

    logger.debug("diagonalized %sx%s matrix over %s, rank %s", m.rows, m.cols, ring, t)
    return Diagonalization(
        u=_freeze(ring, st.u, m.rows, m.rows),
        u_inv=_freeze(ring, st.ui, m.rows, m.rows),
        d=_freeze(ring, st.d, m.rows, m.cols),
        v=_freeze(ring, st.v, m.cols, m.cols),
        v_inv=_freeze(ring, st.vi, m.cols, m.cols),
        rank=t,
    )


def _find_non_multiple(st: _Elimination, t: int, pivot: int) -> Optional[int]:
    for i in range(t + 1, st.rows):
        row = st.d[i]
        for j in range(t + 1, st.cols):
            if row[j] % pivot != 0:
                return i
    return None


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """
    Return (u, d, v) with u @ m @ v == d.

    Over Z, u and v are unimodular and d is diagonal with positive invariant
    factors d_1 | d_2 | ... . Over a field the nonzero diagonal entries are 1.
    """
    diag = diagonalize(m)
    return diag.u, diag.d, diag.v


# Hermite forms and canonical bases


def _row_hermite_lists(ring: RingSpec, data: list[list[Any]], cols: int) -> list[list[Any]]:
    """Row-style Hermite normal form (RREF over a field), zero rows dropped."""
    rows = [list(r) for r in data]
    n = len(rows)
    t = 0
    for c in range(cols):
        if t >= n:
            break
        found = False
        while True:
            best, best_size = None, None
            for i in range(t, n):
                x = rows[i][c]
                if x != 0:
                    s = ring.size(x)
                    if best_size is None or s < best_size:
                        best, best_size = i, s
            if best is None:
                break
            found = True
            rows[t], rows[best] = rows[best], rows[t]
            pivot = rows[t][c]
            done = True
            for i in range(t + 1, n):
                x = rows[i][c]
                if x != 0:
                    q = ring.quotient(x, pivot)
                    rows[i] = [ring.sub(a, ring.mul(q, b)) for a, b in zip(rows[i], rows[t])]
                    if rows[i][c] != 0:
                        done = False
            if done:
                break
        if not found:
            continue
        _, unit = ring.normalize_associate(rows[t][c])
        rows[t] = [ring.mul(unit, x) for x in rows[t]]
        pivot = rows[t][c]
        for i in range(t):
            x = rows[i][c]
            if x != 0:
                q = ring.quotient(x, pivot)
                rows[i] = [ring.sub(a, ring.mul(q, b)) for a, b in zip(rows[i], rows[t])]
        t += 1
    return [r for r in rows[:t] if any(x != 0 for x in r)]


def hermite_normal_form(m: Matrix) -> Matrix:
    """Row Hermite normal form with zero rows removed (RREF over a field)."""
    rows = _row_hermite_lists(m.ring, m.to_lists(), m.cols)
    return _freeze(m.ring, rows, len(rows), m.cols)


def _canonical_columns(ring: RingSpec, basis: Matrix) -> Matrix:
    """Replace the column basis by the Hermite basis of the same lattice."""
    if basis.cols == 0:
        return basis
    rows = _row_hermite_lists(ring, basis.transpose().to_lists(), basis.rows)
    return _freeze(ring, rows, len(rows), basis.rows).transpose()


def _column_echelon(m: Matrix) -> tuple[_Elimination, int]:
    """Column-reduce m, returning the state and the number of pivot columns."""
    ring = m.ring
    st = _Elimination(m)
    t = 0
    for i in range(m.rows):
        if t >= m.cols:
            break
        while True:
            best, best_size = None, None
            row = st.d[i]
            for j in range(t, m.cols):
                x = row[j]
                if x != 0:
                    s = ring.size(x)
                    if best_size is None or s < best_size:
                        best, best_size = j, s
            if best is None:
                break
            st.swap_cols(t, best)
            pivot = st.d[i][t]
            done = True
            for j in range(t + 1, m.cols):
                x = st.d[i][j]
                if x != 0:
                    st.add_col(j, t, ring.neg(ring.quotient(x, pivot)))
                    if st.d[i][j] != 0:
                        done = False
            if done:
                t += 1
                break
    return st, t


def kernel_basis(m: Matrix) -> Matrix:
    """
    Columns form a basis of ker(m); over Z the basis is saturated.

    The basis is put in a canonical form (Hermite form of its transpose) so
    that the output depends only on the kernel, not on the elimination path.
    """
    st, r = _column_echelon(m)
    v = _freeze(m.ring, st.v, m.cols, m.cols)
    k = v.select_columns(range(r, m.cols))
    return _canonical_columns(m.ring, k)


def column_space_basis(m: Matrix) -> Matrix:
    """Columns form a basis of the image lattice (subspace over a field)."""
    st, r = _column_echelon(m)
    e = _freeze(m.ring, st.d, m.rows, m.cols).select_columns(range(r))
    return _canonical_columns(m.ring, e)


def rank(m: Matrix) -> int:
    return len(invariant_factors(m))


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """
    Exact solution x of a @ x == b, or None when there is none.

    b may have several columns; each is solved independently.
    """
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    if a.rows != b.rows:
        raise PreconditionError("solve needs a and b with equal row counts")
    ring = a.ring
    diag = diagonalize(a)
    y = diag.u @ b
    z = [[ring.zero] * b.cols for _ in range(a.cols)]
    for i in range(a.rows):
        for j in range(b.cols):
            val = y[i, j]
            if i < diag.rank:
                dii = diag.d[i, i]
                if ring.kind == "Z":
                    if val % dii != 0:
                        return None
                    z[i][j] = val // dii
                else:
                    z[i][j] = ring.mul(val, ring.inverse(dii))
            elif val != 0:
                return None
    return diag.v @ _freeze(ring, z, a.cols, b.cols)


def solve_vector(a: Matrix, b: tuple) -> Optional[tuple]:
    x = solve(a, Matrix.from_columns(a.ring, [b], a.rows))
    return None if x is None else x.column(0)


def left_inverse(m: Matrix) -> Optional[Matrix]:
    """A matrix l with l @ m == identity, or None if m is not split injective."""
    ring = m.ring
    diag = diagonalize(m)
    if diag.rank != m.cols:
        return None
    inv_d = [[ring.zero] * m.rows for _ in range(m.cols)]
    for i in range(m.cols):
        dii = diag.d[i, i]
        if not ring.is_unit(dii):
            return None
        inv_d[i][i] = ring.inverse(dii)
    return diag.v @ _freeze(ring, inv_d, m.cols, m.rows) @ diag.u


def complement_basis(m: Matrix) -> Optional[Matrix]:
    """
    For a split injection m, columns spanning a complement of its image.

    Together with the columns of m they form a basis of the target.
    """
    diag = diagonalize(m)
    if diag.rank != m.cols or not all(m.ring.is_unit(x) for x in diag.diagonal):
        return None
    return diag.u_inv.select_columns(range(m.cols, m.rows))
