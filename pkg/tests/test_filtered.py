import pytest

from app.core.errors import InputError, InvalidComplexError, NonStrictStubError, RingMismatchError
from app.services.complexes import ChainComplex, ChainMap, homology, is_quasi_iso
from app.services.filtered import (
    FilteredStub,
    GradedComplex,
    WeightedComplex,
    associated_graded,
    coherent_cochain,
    constant_stub,
    day_tensor_graded,
    day_tensor_stub,
    dual_graded,
    e1_page,
    graded_pieces,
    ideal_power_stub,
    ins_stub,
    is_beilinson_static,
    is_beilinson_static_graded,
    padic_stub,
    postnikov_stub,
    rees,
    shear,
    strictify,
    stub_direct_sum,
    uniform_weights,
    unit_stub,
)
from app.services.linalg import Matrix, QQ, ZZ


def point(degree: int = 0, ring=ZZ) -> ChainComplex:
    return ChainComplex.concentrated(ring, degree)


def mult(n: int) -> ChainComplex:
    return ChainComplex.two_term(Matrix.from_rows(ZZ, [[n]]), 1)


def gr_labels(stub: FilteredStub) -> list[dict]:
    return [homology(g).labels() for g in graded_pieces(stub)]


def static_pair() -> WeightedComplex:
    """[Z --1--> Z] in degrees 0, -1 with weights 0 and 1."""
    c = ChainComplex(ZZ, {0: 1, -1: 1}, {0: Matrix.from_rows(ZZ, [[1]])})
    return WeightedComplex(c, {0: (0,), -1: (1,)})


# constructors


def test_unit_and_constant_stubs():
    unit = unit_stub(ZZ, 3)
    assert unit.strict
    assert gr_labels(unit) == [{0: "Z"}, {}, {}]
    assert gr_labels(constant_stub(point(), 3)) == [{}, {}, {0: "Z"}]


def test_ins_stub_puts_the_complex_in_one_weight():
    assert gr_labels(ins_stub(1, mult(2), 3)) == [{}, {0: "Z/2"}, {}]
    assert gr_labels(ins_stub(5, point(), 3)) == [{}, {}, {}]


def test_stub_length_must_be_positive():
    with pytest.raises(InputError):
        unit_stub(ZZ, 0)


def test_padic_stub_levels_and_graded_pieces():
    stub = padic_stub(2, 3)
    assert [homology(level).labels() for level in stub.levels] == [
        {0: "Z/8"},
        {0: "Z/4"},
        {0: "Z/2"},
    ]
    assert gr_labels(stub) == [{0: "Z/2"}] * 3
    assert not stub.strict
    assert not is_beilinson_static(stub)


def test_ideal_power_stub_with_varying_indices():
    stub = ideal_power_stub(ZZ, [2, 3], 2)
    assert homology(stub.levels[0]).labels() == {0: "Z/6"}
    assert gr_labels(stub) == [{0: "Z/2"}, {0: "Z/3"}]


def test_direct_sum_of_stubs():
    s = stub_direct_sum(padic_stub(2, 2), padic_stub(3, 2))
    assert gr_labels(s) == [{0: "Z/6"}, {0: "Z/6"}]
    with pytest.raises(InputError):
        stub_direct_sum(padic_stub(2, 2), padic_stub(2, 3))


def test_postnikov_stub_has_homology_in_its_own_weight():
    stub = postnikov_stub(ChainComplex(ZZ, {0: 1, 1: 1}), 2)
    assert stub.strict
    assert gr_labels(stub) == [{0: "Z"}, {1: "Z"}]


def test_stub_from_a_filtration_of_z_by_powers_of_two():
    z = point()
    doubling = ChainMap(z, z, {0: Matrix.from_rows(ZZ, [[2]])})
    stub = FilteredStub.from_filtration([z, z, z], [doubling, doubling])
    assert stub.N == 2
    assert [homology(level).labels() for level in stub.levels] == [{0: "Z/4"}, {0: "Z/2"}]
    assert gr_labels(stub) == gr_labels(padic_stub(2, 2))
    assert not stub.strict
    with pytest.raises(InputError):
        FilteredStub.from_filtration([z], [])


# payloads


def test_stub_payload_roundtrip():
    stub = padic_stub(3, 2)
    assert FilteredStub.from_payload(stub.to_payload()) == stub


def test_payload_claiming_strictness_is_checked():
    payload = padic_stub(2, 2).to_payload()
    payload["strict"] = True
    with pytest.raises(NonStrictStubError):
        FilteredStub.from_payload(payload)


def test_malformed_stub_payload():
    with pytest.raises(InputError):
        FilteredStub.from_payload({"N": 2, "levels": "nope"})


# strictness and Day tensor


def test_strictify_keeps_levels_up_to_quasi_isomorphism():
    stub = padic_stub(2, 3)
    strict, to_original = strictify(stub)
    assert strict.strict
    assert all(is_quasi_iso(f) for f in to_original)
    assert gr_labels(strict) == gr_labels(stub)


def test_day_tensor_of_ins_stubs_adds_weights():
    out = day_tensor_stub(ins_stub(1, mult(2), 3), ins_stub(1, point(), 3))
    assert gr_labels(out) == [{}, {}, {0: "Z/2"}]


def test_day_tensor_with_unit():
    unit = unit_stub(ZZ, 3)
    assert gr_labels(day_tensor_stub(unit, unit)) == [{0: "Z"}, {}, {}]
    out = day_tensor_stub(padic_stub(2, 2), unit_stub(ZZ, 2), strictify_inputs=True)
    assert gr_labels(out) == [{0: "Z/2"}, {0: "Z/2"}]


def test_day_tensor_refuses_non_strict_inputs():
    with pytest.raises(NonStrictStubError):
        day_tensor_stub(padic_stub(2, 2), unit_stub(ZZ, 2))


def test_day_tensor_uses_the_shorter_length():
    assert day_tensor_stub(unit_stub(ZZ, 2), unit_stub(ZZ, 4)).N == 2


def test_gr_of_a_day_tensor_is_the_day_tensor_of_gr():
    a = static_pair().to_stub(2)
    b = stub_direct_sum(ins_stub(1, mult(2), 2), unit_stub(ZZ, 2))
    assert a.strict and b.strict
    expected = day_tensor_graded(associated_graded(a), associated_graded(b)).homology_labels()
    assert expected == {0: {0: "Z"}, 1: {-1: "Z", 0: "Z/2"}, 2: {-1: "Z/2"}}
    out = associated_graded(day_tensor_stub(a, b)).homology_labels()
    assert out == {w: t for w, t in expected.items() if w < 2}


# graded data


def test_rees_cone_of_t_is_the_associated_graded():
    for stub in (padic_stub(2, 3), postnikov_stub(mult(0), 2), unit_stub(ZZ, 2)):
        r = rees(stub)
        assert r.cone_of_t().homology_labels() == associated_graded(stub).homology_labels()
        assert r.graded.weights == [s for s, c in enumerate(stub.levels) if not c.is_zero]


def test_e1_page_of_padic_stub():
    page = e1_page(padic_stub(3, 2))
    assert {s: t.labels() for s, t in page.items()} == {0: {0: "Z/3"}, 1: {0: "Z/3"}}


def test_coherent_cochain_of_a_static_stub():
    stub = static_pair().to_stub(2)
    assert stub.strict
    assert is_beilinson_static(stub)
    cochain = coherent_cochain(stub)
    assert cochain.labels() == {0: "Z", 1: "Z"}
    assert abs(cochain.d1[0][0, 0]) == 1
    assert cochain.is_cochain()


def test_unit_stub_cochain():
    cochain = coherent_cochain(unit_stub(ZZ, 3))
    assert cochain.labels() == {0: "Z"}
    assert cochain.is_cochain()


# weighted complexes


def test_weighted_complex_windows():
    c = mult(2)
    weighted = WeightedComplex(c, {1: (0,), 0: (1,)})
    stub = weighted.to_stub(2)
    assert stub.strict
    assert gr_labels(stub) == [{1: "Z"}, {0: "Z"}]
    assert uniform_weights(c, {1: 0, 0: 1}) == weighted


def test_weighted_complex_rejects_bad_weights():
    with pytest.raises(InvalidComplexError):
        WeightedComplex(mult(2), {1: (1,), 0: (0,)})
    with pytest.raises(InvalidComplexError):
        WeightedComplex(mult(2), {1: (0, 0), 0: (1,)})


# graded complexes


def test_zero_pieces_are_dropped():
    assert GradedComplex(ZZ, {0: ChainComplex.zero(ZZ), 2: point()}).weights == [2]


def test_shear_is_invertible():
    x = GradedComplex(ZZ, {0: mult(3), 1: point(), 2: point(1)})
    assert shear(shear(x, 1), -1) == x
    assert shear(GradedComplex.single(point(), 1), 1)[1] == point(2)


def test_shear_is_monoidal():
    a = GradedComplex(ZZ, {0: mult(3), 1: point()})
    b = GradedComplex(ZZ, {1: mult(2), 2: point(-1)})
    for k in (1, -1):
        sheared_product = shear(day_tensor_graded(a, b), k)
        product_of_sheared = day_tensor_graded(shear(a, k), shear(b, k))
        assert sheared_product.weights == product_of_sheared.weights
        for w in sheared_product.weights:
            assert sheared_product[w].ranks == product_of_sheared[w].ranks
        assert sheared_product.homology_labels() == product_of_sheared.homology_labels()


def test_day_tensor_of_graded_complexes():
    a = GradedComplex.single(point(), 1)
    b = GradedComplex.single(mult(2), 2)
    assert day_tensor_graded(a, b).homology_labels() == {3: {0: "Z/2"}}
    assert day_tensor_graded(GradedComplex.unit(ZZ), b).homology_labels() == b.homology_labels()
    with pytest.raises(RingMismatchError):
        day_tensor_graded(a, GradedComplex.unit(QQ))


def test_dual_negates_weights_and_degrees():
    x = dual_graded(GradedComplex.single(point(1), 2))
    assert x.weights == [-2]
    assert x[-2] == point(-1)


def test_graded_beilinson_condition():
    assert is_beilinson_static_graded(GradedComplex.single(point(-1), 1))
    assert not is_beilinson_static_graded(GradedComplex.single(point(), 1))
    assert is_beilinson_static_graded(associated_graded(static_pair().to_stub(2)))


def test_graded_payload_roundtrip():
    x = GradedComplex(ZZ, {0: mult(2), 3: point(1)})
    assert GradedComplex.from_payload(x.to_payload()) == x
    with pytest.raises(InputError):
        GradedComplex.from_payload({"ring": "Z"})
