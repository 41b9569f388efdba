"""
Golden cases. Each case computes a plain value (dicts, lists, labels,
booleans) that is compared, in canonical wire form, with the golden file.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable, Iterable

from app.core.config import settings
from app.services.complexes import ChainComplex, homology, shift
from app.services.dalg import (
    AlgebraPresentation,
    circle_comparison,
    cotangent_complex,
    crystallization_gr_compare,
    d_minus,
    DMinusDual,
    derham_stub,
    free_crystalline_stub,
    free_crystalline_summands,
    graded_free_table,
    hkr_graded_ranks,
    hochschild_stub,
    hodge_graded_pieces,
    infinitesimal_stub,
    kahler,
    padic_multiplication_check,
    pd_envelope_stub,
    qrsp_truncated_check,
    stub_map_gr_scalars,
    tor_interference_example,
)
from app.services.dold_kan import PowerFunctorKind, derived_power, goerss_ranks, lsym_total
from app.services.filtered import FilteredStub, GradedComplex, graded_pieces, is_beilinson_static
from app.services.linalg import Matrix, QQ, RingSpec, ZZ
from app.services.suite.presets import preset

F2 = RingSpec.prime_field(2)
F3 = RingSpec.prime_field(3)


@dataclass(frozen=True)
class SuiteCase:
    name: str
    group: str
    provenance: str
    compute: Callable[[], Any]


# helpers


def graded_labels(x: GradedComplex) -> dict:
    return x.homology_labels()


def gr_labels(stub: FilteredStub) -> list[dict]:
    return [homology(g).labels() for g in graded_pieces(stub)]


def integral_labels(c: ChainComplex) -> dict:
    """Homology labels with F_p-vector spaces read as abelian groups."""
    return homology(c).restrict_to_integers().labels()


def level_connectivity(stub: FilteredStub) -> bool:
    """Level s has no homology below degree s."""
    return all(
        all(d >= s for d in homology(level).entries) for s, level in enumerate(stub.levels)
    )


def random_two_term_complex(rng: random.Random, bottom: int, max_rank: int = 2, ring: RingSpec = ZZ) -> ChainComplex:
    """[Z^a -> Z^b] in degrees bottom+1, bottom with entries in [-3, 3]."""
    a, b = rng.randint(0, max_rank), rng.randint(0, max_rank)
    if a == 0 or b == 0:
        m = Matrix.zeros(ring, b, a)
    else:
        m = Matrix.from_rows(ring, [[rng.randint(-3, 3) for _ in range(a)] for _ in range(b)])
    if a == 0 and b == 0:
        return ChainComplex.concentrated(ring, bottom, 1)
    return ChainComplex.two_term(m, bottom + 1)


def random_family(count: int, bottom: int, salt: int = 0) -> list[ChainComplex]:
    return [
        random_two_term_complex(random.Random(settings.random_seed + salt + i), bottom)
        for i in range(count)
    ]


def decalage_failures(c: ChainComplex, r: int) -> list[str]:
    """LSym^r(P[1]) = LΛ^r(P)[r] and LΛ^r(P[1]) = LΓ^r(P)[r] on homology."""
    cutoff = r * (c.hi + 1) + 1
    lifted = shift(c, 1)
    out = []
    pairs = (("sym", "ext"), ("ext", "div"))
    for outer, inner in pairs:
        lhs = homology(derived_power(PowerFunctorKind(outer, r), lifted, cutoff)).labels()
        rhs = homology(shift(derived_power(PowerFunctorKind(inner, r), c, cutoff), r)).labels()
        if lhs != rhs:
            out.append(f"L{outer}^{r}(P[1]) = {lhs} but L{inner}^{r}(P)[{r}] = {rhs}")
    return out


def tor_amplitude_lower(a: int, r: int) -> int:
    if r <= 1:
        return a
    if a == 0:
        return 0
    if a == 1:
        return r
    return a + 2 * r - 2


def tor_amplitude_failures(c: ChainComplex, a: int, r: int) -> list[str]:
    b = a + 1
    table = homology(derived_power(PowerFunctorKind("sym", r), c, r * b + 1))
    lower, upper = tor_amplitude_lower(a, r), r * b
    out = [f"H_{d} = {m.label} outside [{lower}, {upper}]" for d, m in table.entries.items() if not lower <= d <= upper]
    top = table.entries.get(upper)
    if top is not None and top.torsion:
        out.append(f"H_{upper} = {top.label} has torsion")
    return out


def _kinds(results: Iterable[Any]) -> list[str]:
    return ["iso" if r.is_iso else "zero" if r.is_zero else "other" for r in results]


# dold_kan


def _lsym_free_Z0() -> dict:
    return graded_labels(lsym_total(ChainComplex.concentrated(ZZ, 0), 4, 10))


def _lsym_free_Z1() -> dict:
    return graded_labels(lsym_total(ChainComplex.concentrated(ZZ, 1), 4, 10))


def _lsym_free_Z2() -> dict:
    return graded_labels(lsym_total(ChainComplex.concentrated(ZZ, 2), 4, 10))


def _lsym_free_F3() -> dict:
    return {
        str(n): graded_labels(lsym_total(ChainComplex.concentrated(F3, n), 4, 10)) for n in range(3)
    }


def _goerss_vanishing() -> dict:
    line = ChainComplex.concentrated(F2, 1)
    return {r: homology(derived_power(PowerFunctorKind("sym", r), line, 10)).labels() for r in range(2, 5)}


def _goerss_admissible() -> dict:
    line = ChainComplex.concentrated(F2, 2)
    engine = {}
    for r in range(1, 5):
        ranks = homology(derived_power(PowerFunctorKind("sym", r), line, 8)).free_ranks()
        engine[r] = {d: k for d, k in ranks.items() if d <= 8}
    return {"engine": engine, "enumerator": goerss_ranks(2, 4, 8)}


def _decalage_family() -> dict:
    family = random_family(20, 0)
    failures = [f for c in family for r in range(1, 4) for f in decalage_failures(c, r)]
    return {"complexes": len(family), "failures": len(failures)}


def _tor_amplitude_family() -> dict:
    low = random_family(20, 0)
    high = random_family(10, 2, salt=1000)
    failures = [f for c in low for r in range(1, 4) for f in tor_amplitude_failures(c, 0, r)]
    failures += [f for c in high for r in range(1, 3) for f in tor_amplitude_failures(c, 2, r)]
    return {"complexes": len(low) + len(high), "failures": len(failures)}


# dalg


def _cotangent_examples() -> dict:
    fp = preset("Fp-over-Z", 2)
    hyper = preset("hypersurface-x2")
    return {
        "Fp-over-Z": homology(cotangent_complex(fp).over_base()).labels(),
        "hypersurface-x2": homology(cotangent_complex(hyper).over_base()).labels(),
        "kahler-Fp-over-Z": kahler(fp).over_base().label,
        "kahler-hypersurface-x2": kahler(hyper).over_base().label,
        "kahler-Zx": kahler(preset("Zx")).label,
    }


def _hodge_examples() -> dict:
    fp = preset("Fp-over-Z", 2)
    return {
        "infinitesimal-2": homology(hodge_graded_pieces(fp, "infinitesimal", 2)).labels(),
        "derham-2": homology(hodge_graded_pieces(fp, "derham", 2)).labels(),
        "hochschild-Zx-1": homology(hodge_graded_pieces(preset("Zx"), "hochschild", 1, poly_weights=[1])).labels(),
    }


def _infinitesimal_fp() -> dict:
    fp = preset("Fp-over-Z", 2)
    stub = infinitesimal_stub(fp, 4)
    formula = [integral_labels(hodge_graded_pieces(fp, "infinitesimal", s)) for s in range(4)]
    gr = gr_labels(stub)
    return {"gr": gr, "matches_formula": gr == formula}


def _infinitesimal_regular_element() -> dict:
    return {
        "x-over-Zx": gr_labels(infinitesimal_stub(preset("x-over-Zx"), 3)),
        "Qx-x": gr_labels(pd_envelope_stub(AlgebraPresentation.parse(QQ, ["x"], ["x"], "regseq"), 3).stub),
    }


def _padic_multiplicativity() -> dict:
    return {f"{i},{j}": ok for (i, j), ok in padic_multiplication_check(2, 3).items()}


def _qrsp() -> dict:
    return {
        "L0": qrsp_truncated_check(0, 2).to_payload(),
        "L1": qrsp_truncated_check(1, 2).to_payload(),
    }


def _derham_fp() -> dict:
    fp = preset("Fp-over-Z", 2)
    pd = pd_envelope_stub(fp, 4)
    gr = gr_labels(pd.stub)
    formula = [integral_labels(hodge_graded_pieces(fp, "derham", s)) for s in range(4)]
    return {"gr": gr, "matches_formula": gr == formula, "pd_relations_form_ideal": pd.is_ideal()}


def _derham_consistency() -> dict:
    weights = list(range(3))
    zx = preset("Zx")
    zx_stub = derham_stub(zx, 2, poly_weights=weights)
    zx_formula = [
        homology(hodge_graded_pieces(zx, "derham", s, poly_weights=weights)).labels() for s in range(2)
    ]
    q = preset("Qx-x2")
    q_stub = derham_stub(q, 3)
    q_formula = [homology(hodge_graded_pieces(q, "derham", s)).labels() for s in range(3)]
    return {
        "Zx": {"gr": gr_labels(zx_stub), "matches_formula": gr_labels(zx_stub) == zx_formula},
        "Zx-beilinson-static": is_beilinson_static(zx_stub),
        "Qx-x2": {"matches_formula": gr_labels(q_stub) == q_formula},
    }


def _hkr(name: str, N: int) -> Callable[[], dict]:
    def compute() -> dict:
        p = preset(name)
        weights = list(range(5))
        stub = hochschild_stub(p, N, degree_cutoff=10, poly_weights=weights)
        formula = [
            homology(hodge_graded_pieces(p, "hochschild", i, poly_weights=weights)).labels() for i in range(N)
        ]
        gr = gr_labels(stub)
        return {
            "gr": gr,
            "matches_formula": gr == formula,
            "ranks_over_R": hkr_graded_ranks(len(p.variables), N),
            "s_connective": level_connectivity(stub),
        }

    return compute


def _hkr_hypersurface() -> dict:
    p = preset("hypersurface-x2")
    stub = hochschild_stub(p, 3, degree_cutoff=10)
    formula = [homology(hodge_graded_pieces(p, "hochschild", i)).labels() for i in range(3)]
    gr = gr_labels(stub)
    return {"gr": gr, "matches_formula": gr == formula}


def _circle() -> dict:
    dual = DMinusDual()
    return {
        "comparison": circle_comparison(4).to_payload(),
        "d_minus": graded_labels(d_minus()),
        "coalgebra": {
            "counit": dual.counit_holds(),
            "coassociative": dual.coassociative(),
            "weights": dual.weights_respected(),
        },
    }


def _graded_monads() -> dict:
    heart = ChainComplex.concentrated(ZZ, -1)
    return {
        "B0": graded_labels(graded_free_table("B", 0, heart, 1, 2, 6)),
        "B0-strict": graded_labels(graded_free_table("B-strict", 0, heart, 1, 2, 6)),
        "N0-on-Z": graded_labels(graded_free_table("N", 0, ChainComplex.concentrated(ZZ, 0), 1, 4, 6)),
    }


def _tor_interference() -> dict:
    return tor_interference_example().to_payload()


def _free_crystalline() -> dict:
    rng = random.Random(settings.random_seed)
    failures = 0
    for _ in range(10):
        i, rank, N = rng.randint(1, 3), rng.randint(0, 2), rng.randint(0, 6)
        for _, summand in free_crystalline_summands(i, rank, N):
            if any(d > 0 for d in homology(summand).entries):
                failures += 1
    return {
        "i1-P1-N2": gr_labels(free_crystalline_stub(1, 1, 2)),
        "i1-P2-N1": gr_labels(free_crystalline_stub(1, 2, 1)),
        "random_coconnective_failures": failures,
    }


def _crystallization() -> dict:
    rational = AlgebraPresentation.parse(QQ, ["x"], ["x"], "regseq")
    out = {"Q": _kinds(crystallization_gr_compare(rational, s) for s in range(7))}
    for p in (2, 3, 5):
        out[f"F_{p}"] = _kinds(crystallization_gr_compare(preset("Fp-over-Z", p), s) for s in range(7))
    return out


def _crystallization_stub_map() -> dict:
    return {str(c): stub_map_gr_scalars(c, 4) for c in (2, 3, 5)}


def build_cases() -> list[SuiteCase]:
    return [
        SuiteCase("lsym-free-Z0", "dold_kan", "PAPER", _lsym_free_Z0),
        SuiteCase("lsym-free-Z1", "dold_kan", "PAPER", _lsym_free_Z1),
        SuiteCase("lsym-free-Z2", "dold_kan", "PAPER", _lsym_free_Z2),
        SuiteCase("lsym-free-F3", "dold_kan", "DERIVED", _lsym_free_F3),
        SuiteCase("goerss-vanishing-F2", "dold_kan", "PAPER", _goerss_vanishing),
        SuiteCase("goerss-admissible-F2", "dold_kan", "PAPER", _goerss_admissible),
        SuiteCase("decalage-family", "dold_kan", "PAPER", _decalage_family),
        SuiteCase("tor-amplitude-family", "dold_kan", "PAPER", _tor_amplitude_family),
        SuiteCase("cotangent-examples", "dalg", "DERIVED", _cotangent_examples),
        SuiteCase("hodge-examples", "dalg", "PAPER", _hodge_examples),
        SuiteCase("infinitesimal-Fp", "dalg", "PAPER", _infinitesimal_fp),
        SuiteCase("infinitesimal-regular-element", "dalg", "TRIVIAL", _infinitesimal_regular_element),
        SuiteCase("padic-multiplicativity", "dalg", "DERIVED", _padic_multiplicativity),
        SuiteCase("qrsp-truncated", "dalg", "PAPER", _qrsp),
        SuiteCase("derham-Fp", "dalg", "PAPER", _derham_fp),
        SuiteCase("derham-consistency", "dalg", "DERIVED", _derham_consistency),
        SuiteCase("hkr-Zx", "dalg", "PAPER", _hkr("Zx", 2)),
        SuiteCase("hkr-Zxy", "dalg", "PAPER", _hkr("Zxy", 3)),
        SuiteCase("hkr-hypersurface-x2", "dalg", "DERIVED", _hkr_hypersurface),
        SuiteCase("filtered-circle", "dalg", "PAPER", _circle),
        SuiteCase("graded-monad-B0", "dalg", "PAPER", _graded_monads),
        SuiteCase("tor-interference-B0", "dalg", "DERIVED", _tor_interference),
        SuiteCase("free-crystalline", "dalg", "PAPER", _free_crystalline),
        SuiteCase("crystallization-gr", "dalg", "PAPER", _crystallization),
        SuiteCase("crystallization-stub-map", "dalg", "DERIVED", _crystallization_stub_map),
    ]
