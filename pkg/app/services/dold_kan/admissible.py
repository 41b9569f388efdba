"""
Homotopy of LSym over F_2 on a shifted line, by counting.

For n >= 1, the homotopy of LSym_{F_2}(F_2[n]) is the exterior algebra on
classes delta_I(x), one for each admissible sequence I = (i_1, ..., i_s)
(i_t >= 2 i_{t+1}, i_s >= 2) of excess i_1 - (i_2 + ... + i_s) at most n.
delta_I(x) has degree n + sum(I) and weight 2^s; the empty sequence gives x.
"""
from __future__ import annotations

from dataclasses import dataclass

from app.core.errors import PreconditionError


@dataclass(frozen=True)
class AdmissibleClass:
    sequence: tuple[int, ...]
    degree: int
    weight: int


def _excess(seq: tuple[int, ...]) -> int:
    return seq[0] - sum(seq[1:]) if seq else 0


def admissible_sequences(n: int, max_degree: int) -> list[AdmissibleClass]:
    """Generators delta_I(x) of degree at most max_degree, x of degree n."""
    if n < 1:
        raise PreconditionError("the exterior description needs n >= 1")
    room = max_degree - n
    found: list[tuple[int, ...]] = []

    def grow(seq: tuple[int, ...], total: int) -> None:
        # seq is built from the right: seq[0] is the leftmost operation so far
        if _excess(seq) <= n:
            found.append(seq)
        first = 2 * seq[0]
        for i in range(first, room - total + 1):
            grow((i,) + seq, total + i)

    if room >= 0:
        found.append(())
        for last in range(2, room + 1):
            grow((last,), last)
    out = [AdmissibleClass(s, n + sum(s), 2 ** len(s)) for s in set(found)]
    return sorted(out, key=lambda c: (c.weight, c.degree, c.sequence))


def goerss_ranks(n: int, weight_cutoff: int, max_degree: int) -> dict[int, dict[int, int]]:
    """
    weight -> degree -> F_2-dimension of LSym^weight(F_2[n]), for weights
    1..weight_cutoff and degrees <= max_degree.
    """
    gens = [g for g in admissible_sequences(n, max_degree) if g.weight <= weight_cutoff]
    # exterior algebra: each generator used at most once
    table: dict[tuple[int, int], int] = {(0, 0): 1}
    for g in gens:
        nxt = dict(table)
        for (w, d), count in table.items():
            key = (w + g.weight, d + g.degree)
            if key[0] <= weight_cutoff and key[1] <= max_degree:
                nxt[key] = nxt.get(key, 0) + count
        table = nxt
    out: dict[int, dict[int, int]] = {}
    for (w, d), count in sorted(table.items()):
        if w >= 1:
            out.setdefault(w, {})[d] = count
    return out
