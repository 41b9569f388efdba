"""
Invariant factors through sparse unit-pivot elimination.

Boundary matrices coming out of the simplicial constructions are large and
mostly zero, and most of their pivots are units. Eliminating those first on a
dict-of-rows copy leaves a small dense core; only that core goes through a full
Smith normal form (sympy's DomainMatrix over ZZ).
"""
from __future__ import annotations

import logging
from typing import Any

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as _dense_invariant_factors

from app.core.metrics import observe_matrix_elimination
from app.services.linalg.matrix import Matrix

logger = logging.getLogger("engine")


def _pick_unit_pivot(rows: dict[int, dict[int, Any]], col_count: dict[int, int], ring) -> tuple[int, int] | None:
    # Markowitz cost: fill-in is bounded by (row length - 1) * (column length - 1)
    best, best_cost = None, None
    for i, row in rows.items():
        row_cost = len(row) - 1
        for j, v in row.items():
            if ring.is_unit(v):
                cost = row_cost * (col_count[j] - 1)
                if best_cost is None or cost < best_cost or (cost == best_cost and (i, j) < best):
                    best, best_cost = (i, j), cost
                    if cost == 0:
                        return best
    return best


def invariant_factors(m: Matrix) -> tuple[int, ...]:
    """
    Nonzero invariant factors of m, positive and ascending.

    The length of the result is the rank of m. Over a field every factor is 1.
    """
    ring = m.ring
    rows: dict[int, dict[int, Any]] = {}
    cols: dict[int, set[int]] = {}
    for i, j, v in m.nonzero_items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)

    units = 0
    while rows:
        col_count = {j: len(s) for j, s in cols.items()}
        pick = _pick_unit_pivot(rows, col_count, ring)
        if pick is None:
            break
        pi, pj = pick
        prow = rows.pop(pi)
        inv = ring.inverse(prow[pj])
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols[pj]):
            row = rows[i]
            factor = ring.mul(row[pj], inv)
            for j, v in prow.items():
                new = ring.sub(row.get(j, ring.zero), ring.mul(factor, v))
                if new == 0:
                    if j in row:
                        del row[j]
                        cols[j].discard(i)
                else:
                    if j not in row:
                        cols[j].add(i)
                    row[j] = new
            if not row:
                del rows[i]
        del cols[pj]
        units += 1

    core: tuple[int, ...] = ()
    if rows:
        row_ids = sorted(rows)
        col_ids = sorted({j for r in rows.values() for j in r})
        index = {j: k for k, j in enumerate(col_ids)}
        dense = [[ZZ(0)] * len(col_ids) for _ in row_ids]
        for a, i in enumerate(row_ids):
            for j, v in rows[i].items():
                dense[a][index[j]] = ZZ(int(v))
        dm = DomainMatrix(dense, (len(row_ids), len(col_ids)), ZZ)
        core = tuple(sorted(abs(int(f)) for f in _dense_invariant_factors(dm) if f != 0))
        logger.debug(
            "dense core %sx%s after %s unit pivots in %sx%s matrix",
            len(row_ids), len(col_ids), units, m.rows, m.cols,
        )

    observe_matrix_elimination(ring.label)
    return (1,) * units + core
