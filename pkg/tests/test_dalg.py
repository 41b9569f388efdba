import pytest
import sympy

from app.core.errors import (
    InputError,
    NonConnectiveError,
    UnsupportedPresentationError,
)
from app.services.complexes import ChainComplex, homology
from app.services.dalg import (
    AlgebraPresentation,
    DMinusDual,
    FiniteAlgebra,
    circle_comparison,
    cotangent_complex,
    crystallization_gr_compare,
    crystallization_stub_map,
    d_minus,
    derham_stub,
    filtered_circle_stub,
    free_crystalline_stub,
    graded_free_table,
    hkr_graded_ranks,
    hochschild_stub,
    hodge_graded_pieces,
    infinitesimal_stub,
    kahler,
    padic_multiplication_check,
    parse_flavor,
    parse_theory,
    pd_envelope_stub,
    qrsp_truncated_check,
    stub_map_gr_scalars,
    tor_interference_example,
)
from app.services.filtered import coherent_cochain, graded_pieces, is_beilinson_static
from app.services.linalg import QQ, ZZ
from app.services.suite.presets import preset


def gr_labels(stub) -> list[dict]:
    return [homology(g).labels() for g in graded_pieces(stub)]


def kinds(p, upto: int = 7) -> list[str]:
    out = []
    for s in range(upto):
        r = crystallization_gr_compare(p, s)
        out.append("iso" if r.is_iso else "zero" if r.is_zero else "other")
    return out


# presentations


def test_presentation_parsing():
    p = AlgebraPresentation.parse("Z", ["x"], ["x^2 - 2*x"], "regseq")
    assert p.codimension == 1
    assert p.to_payload()["rels"] == ["x^2 - 2*x"]
    assert AlgebraPresentation.from_payload(p.to_payload()) == p
    assert AlgebraPresentation.parse("Q", ["x"], ["x/2"], "regseq").codimension == 1


@pytest.mark.parametrize(
    "ring,variables,relations,regularity",
    [
        ("Z", ["x"], ["x"], "smooth"),
        ("Z", ["x", "x"], [], "smooth"),
        ("Z", ["x"], ["y"], "regseq"),
        ("Z", ["x"], ["x/2"], "regseq"),
        ("Z", ["x"], ["x +"], "regseq"),
        ("Z", ["x"], ["x"], "regular"),
        ("Fp:4", ["x"], [], "smooth"),
    ],
)
def test_bad_presentations_are_input_errors(ring, variables, relations, regularity):
    with pytest.raises(InputError):
        AlgebraPresentation.parse(ring, variables, relations, regularity)


def test_unknown_preset():
    with pytest.raises(InputError):
        preset("nope")
    with pytest.raises(InputError):
        preset("Fp-over-Z", 4)
    with pytest.raises(InputError):
        preset("filtered-circle")


# cotangent complex


def test_cotangent_complex_examples():
    fp = preset("Fp-over-Z", 2)
    hyper = preset("hypersurface-x2")
    assert homology(cotangent_complex(fp).over_base()).labels() == {1: "F_2"}
    assert homology(cotangent_complex(hyper).over_base()).labels() == {0: "Z+Z/2", 1: "Z"}
    assert cotangent_complex(hyper).summary()["degree_ranks_over_S"] == {"0": 1, "1": 1}
    assert cotangent_complex(hyper, relative=True).p_rank == 0


def test_kahler_differentials():
    assert kahler(preset("Fp-over-Z", 2)).over_base().label == "0"
    assert kahler(preset("hypersurface-x2")).over_base().label == "Z+Z/2"
    assert kahler(preset("Zx")).label == "free on dx"


def test_cotangent_complex_needs_a_regularity_claim():
    with pytest.raises(UnsupportedPresentationError):
        cotangent_complex(AlgebraPresentation.parse("Z", ["x"], ["x^2"]))


# finite algebras


def test_finite_algebra_over_z():
    alg = FiniteAlgebra.from_presentation(AlgebraPresentation.parse("Z", ["x"], ["x^2 - 2*x"], "regseq"))
    assert alg.dim == 2
    x = alg.matrix_of(sympy.Symbol("x"))
    assert [[x[i, j] for j in range(2)] for i in range(2)] == [[0, 0], [1, 2]]


def test_finite_algebra_over_a_field():
    x, y = sympy.symbols("x y")
    alg = FiniteAlgebra.from_relations(QQ, [x, y], [x**2, y**2])
    assert alg.basis == ((0, 0), (1, 0), (0, 1), (1, 1))
    assert alg.is_zero(alg.element_of(x * x * y))
    assert alg.multiply(alg.element_of(x), alg.element_of(y)) == alg.element_of(x * y)


def test_finite_algebra_refusals():
    x, y = sympy.symbols("x y")
    with pytest.raises(UnsupportedPresentationError):
        FiniteAlgebra.from_relations(ZZ, [x], [2 * x**2 - 1])
    with pytest.raises(UnsupportedPresentationError):
        FiniteAlgebra.from_relations(QQ, [x], [])
    with pytest.raises(UnsupportedPresentationError):
        FiniteAlgebra.from_relations(QQ, [x, y], [x * y])


# Hodge-graded pieces


def test_theory_names():
    assert parse_theory("hh") == "hochschild"
    assert parse_theory("de-rham") == "derham"
    with pytest.raises(InputError):
        parse_theory("crystalline")


def test_hodge_pieces_of_fp():
    fp = preset("Fp-over-Z", 2)
    assert homology(hodge_graded_pieces(fp, "infinitesimal", 2)).labels() == {0: "F_2"}
    assert homology(hodge_graded_pieces(fp, "derham", 2)).labels() == {0: "F_2"}
    with pytest.raises(InputError):
        hodge_graded_pieces(fp, "derham", -1)


def test_hodge_pieces_of_a_polynomial_ring():
    zx = preset("Zx")
    assert homology(hodge_graded_pieces(zx, "hochschild", 1, poly_weights=[1])).labels() == {1: "Z"}
    with pytest.raises(NonConnectiveError):
        hodge_graded_pieces(zx, "infinitesimal", 1)


# infinitesimal and crystalline stubs


def test_infinitesimal_stubs():
    assert gr_labels(infinitesimal_stub(preset("Fp-over-Z", 2), 4)) == [{0: "Z/2"}] * 4
    assert gr_labels(infinitesimal_stub(preset("x-over-Zx"), 3)) == [{0: "Z"}] * 3
    with pytest.raises(InputError):
        infinitesimal_stub(preset("Fp-over-Z", 2), 0)


def test_padic_filtration_is_multiplicative():
    checks = padic_multiplication_check(2, 3)
    assert set(checks) == {(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)}
    assert all(checks.values())


@pytest.mark.parametrize("level,dims", [(0, [1, 1, 1]), (1, [2, 2, 2])])
def test_truncated_qrsp_pieces_are_free_of_rank_one(level, dims):
    report = qrsp_truncated_check(level, 2)
    assert report.free_rank_one
    assert report.to_payload()["graded_dims"] == dims
    assert all(report.surjective)


def test_pd_envelope_of_fp():
    pd = pd_envelope_stub(preset("Fp-over-Z", 2), 4)
    assert gr_labels(pd.stub) == [{0: "Z/2"}] * 4
    assert pd.is_ideal()


def test_pd_envelope_over_q_is_the_adic_filtration():
    q = AlgebraPresentation.parse(QQ, ["x"], ["x"], "regseq")
    assert gr_labels(pd_envelope_stub(q, 3).stub) == [{0: "Q"}] * 3


def test_pd_envelope_refuses_unsupported_bases():
    with pytest.raises(UnsupportedPresentationError):
        pd_envelope_stub(AlgebraPresentation.parse("Fp:2", ["x"], ["x"], "regseq"), 2)
    with pytest.raises(UnsupportedPresentationError):
        pd_envelope_stub(AlgebraPresentation.parse("Z", [], ["1"], "regseq"), 2)
    with pytest.raises(UnsupportedPresentationError):
        pd_envelope_stub(AlgebraPresentation.parse("Z", ["x"], ["x^2 - 2*x"], "regseq"), 2)


def test_pd_envelope_of_a_coordinate_hyperplane_over_z():
    pd = pd_envelope_stub(preset("x-over-Zx"), 3)
    assert pd.stub.strict
    assert gr_labels(pd.stub) == [{0: "Z"}] * 3
    assert homology(pd.stub.levels[0]).labels() == {0: "Z^3"}
    assert pd.generator is None


def test_pd_envelope_of_a_square_over_z():
    pd = pd_envelope_stub(preset("hypersurface-x2"), 2)
    assert gr_labels(pd.stub) == [{0: "Z^2"}] * 2


def test_derham_stub_of_a_polynomial_ring():
    stub = derham_stub(preset("Zx"), 2, poly_weights=[0, 1, 2])
    assert gr_labels(stub) == [{0: "Z^3"}, {-1: "Z^2"}]
    assert is_beilinson_static(stub)


def test_derham_stub_matches_graded_pieces_over_q():
    q = preset("Qx-x2")
    stub = derham_stub(q, 3)
    assert gr_labels(stub) == [homology(hodge_graded_pieces(q, "derham", s)).labels() for s in range(3)]


@pytest.mark.parametrize("name", ["x-over-Zx", "hypersurface-x2"])
def test_derham_stub_matches_graded_pieces_over_z(name):
    p = preset(name)
    stub = derham_stub(p, 3, poly_weights=range(7))
    assert stub.strict
    assert gr_labels(stub) == [homology(hodge_graded_pieces(p, "derham", s)).labels() for s in range(3)]


def test_derham_stub_of_a_point_over_z():
    stub = derham_stub(preset("x-over-Zx"), 3)
    assert gr_labels(stub) == [{0: "Z"}, {}, {}]
    assert homology(stub.levels[0]).labels() == {0: "Z"}
    assert gr_labels(derham_stub(preset("hypersurface-x2"), 1)) == [{0: "Z^2"}]


def test_derham_stub_refuses_inhomogeneous_relations_over_z():
    with pytest.raises(UnsupportedPresentationError):
        derham_stub(AlgebraPresentation.parse("Z", ["x"], ["x^2 - 2*x"], "regseq"), 2)


def test_derham_stub_degree_cutoff():
    p = AlgebraPresentation.parse("Z", ["x", "y"], ["x", "y"], "regseq")
    cut = derham_stub(p, 2, degree_cutoff=0)
    assert all(level.truncated_above == 0 for level in cut.levels)
    assert 2 not in cut.levels[0].ranks
    assert homology(graded_pieces(cut)[0]).labels()[0] == "Z"
    full = derham_stub(p, 2)
    assert full.levels[0].truncated_above is None
    assert 2 in full.levels[0].ranks
    assert gr_labels(full) == [{0: "Z"}, {}]
    with pytest.raises(InputError):
        derham_stub(p, 2, degree_cutoff=-1)


def test_derham_stub_coherent_cochain_is_the_de_rham_complex():
    cochain = coherent_cochain(derham_stub(preset("Zxy"), 3, poly_weights=[0, 1, 2]))
    assert cochain.labels() == {0: "Z^6", 1: "Z^6", 2: "Z"}
    assert not cochain.d1[0].is_zero()
    assert not cochain.d1[1].is_zero()
    assert cochain.is_cochain()


def test_free_crystalline_stubs():
    assert gr_labels(free_crystalline_stub(1, 1, 2)) == [{0: "Z"}] * 3
    assert gr_labels(free_crystalline_stub(1, 2, 1)) == [{0: "Z"}, {0: "Z^2"}]
    with pytest.raises(InputError):
        free_crystalline_stub(0, 1, 2)


def test_crystallization_comparison_fails_past_the_prime():
    assert kinds(AlgebraPresentation.parse(QQ, ["x"], ["x"], "regseq")) == ["iso"] * 7
    assert kinds(preset("Fp-over-Z", 2)) == ["iso", "iso"] + ["zero"] * 5
    assert kinds(preset("Fp-over-Z", 3)) == ["iso"] * 3 + ["zero"] * 4
    assert kinds(preset("Fp-over-Z", 5)) == ["iso"] * 5 + ["zero"] * 2


def test_crystallization_comparison_payload():
    payload = crystallization_gr_compare(preset("Fp-over-Z", 2), 2).to_payload()
    assert payload["is_zero"] and not payload["is_iso"]
    with pytest.raises(InputError):
        crystallization_gr_compare(preset("Fp-over-Z", 2), -1)


@pytest.mark.parametrize(
    "c,scalars",
    [(2, [1, 1, 0, 0]), (3, [1, 1, 2, 0]), (5, [1, 1, 2, 1])],
)
def test_stub_map_scalars_are_factorials(c, scalars):
    assert stub_map_gr_scalars(c, 4) == scalars


def test_crystallization_stub_map_levels():
    maps = crystallization_stub_map(2, 3)
    assert [m.f(0)[0, 0] for m in maps] == [1, 1, 2]
    assert [homology(m.source).labels() for m in maps] == [{0: "Z/8"}, {0: "Z/4"}, {0: "Z/2"}]


# Hochschild


def test_hkr_for_polynomial_rings():
    weights = list(range(5))
    zx = hochschild_stub(preset("Zx"), 2, degree_cutoff=10, poly_weights=weights)
    assert gr_labels(zx) == [{0: "Z^5"}, {1: "Z^4"}]
    zxy = hochschild_stub(preset("Zxy"), 3, degree_cutoff=10, poly_weights=weights)
    assert gr_labels(zxy) == [{0: "Z^15"}, {1: "Z^20"}, {2: "Z^6"}]
    assert hkr_graded_ranks(2, 3) == [1, 2, 1]


def test_hkr_for_a_hypersurface():
    stub = hochschild_stub(preset("hypersurface-x2"), 3, degree_cutoff=10)
    assert gr_labels(stub) == [{0: "Z^2"}, {1: "Z+Z/2", 2: "Z"}, {3: "Z+Z/2", 4: "Z"}]


def test_hochschild_refuses_unsupported_presentations():
    with pytest.raises(UnsupportedPresentationError):
        hochschild_stub(AlgebraPresentation.parse("Z", ["x", "y"], ["x*y", "x^2"], "regseq"), 2)
    with pytest.raises(UnsupportedPresentationError):
        hochschild_stub(AlgebraPresentation.parse("Z", [], [], "smooth"), 2)


# filtered circle


def test_filtered_circle_comparison():
    comparison = circle_comparison(4)
    assert comparison.passed
    payload = comparison.to_payload()
    assert payload["total_homology"] == {"0": "Z", "1": "Z"}
    assert payload["graded_homology"] == {"0": {"0": "Z"}, "1": {"1": "Z"}}


def test_d_minus_and_its_dual_coalgebra():
    assert d_minus().homology_labels() == {0: {0: "Z"}, 1: {-1: "Z"}}
    dual = DMinusDual()
    assert dual.counit_holds() and dual.coassociative() and dual.weights_respected()


def test_filtered_circle_needs_two_weights():
    with pytest.raises(InputError):
        filtered_circle_stub(1)


# graded monads


def test_graded_free_tables():
    heart = ChainComplex.concentrated(ZZ, -1)
    assert graded_free_table("B", 0, heart, 1, 2, 6).homology_labels() == {
        0: {0: "Z"},
        1: {-1: "Z"},
        2: {-2: "Z/2"},
    }
    assert graded_free_table("B-strict", 0, heart, 1, 2, 6).homology_labels() == {0: {0: "Z"}, 1: {-1: "Z"}}
    n_table = graded_free_table("N", 0, ChainComplex.concentrated(ZZ, 0), 1, 4, 6)
    assert n_table.homology_labels() == {w: {0: "Z"} for w in range(5)}


def test_monad_flavor_names():
    assert parse_flavor("b_strict") == "B-strict"
    with pytest.raises(InputError):
        parse_flavor("C")
    with pytest.raises(InputError):
        graded_free_table("N", 0, ChainComplex.concentrated(ZZ, 0), 0)


def test_tor_interference():
    example = tor_interference_example()
    assert example.free_on_two_static
    assert not example.square_static
    assert example.square_weight4 == {-3: "Z/2", -4: "(Z/2)^5"}
