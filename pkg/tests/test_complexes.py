import random

import pytest

from app.core.errors import InputError, InvalidChainMapError, InvalidComplexError, RingMismatchError
from app.schemas import ComplexPayload
from app.services.complexes import (
    ChainComplex,
    ChainMap,
    change_ring,
    cone,
    direct_sum,
    dual,
    euler_characteristic,
    homology,
    homology_presentation,
    induced_map,
    is_quasi_iso,
    long_exact_sequence_check,
    mapping_cylinder,
    minimal_model,
    shift,
    tensor,
    truncate_connective,
)
from app.services.complexes.homology import HomologyTable
from app.services.linalg import Matrix, QQ, RingSpec, ZZ, kernel_basis

F2 = RingSpec.prime_field(2)
F3 = RingSpec.prime_field(3)


def mult(n: int, ring: RingSpec = ZZ, top: int = 1) -> ChainComplex:
    """[Z --n--> Z] in degrees top, top - 1"""
    return ChainComplex.two_term(Matrix.from_rows(ring, [[n]]), top)


def point(ring: RingSpec = ZZ, degree: int = 0, rank: int = 1) -> ChainComplex:
    return ChainComplex.concentrated(ring, degree, rank)


def random_complex(rng: random.Random, ring: RingSpec = ZZ) -> ChainComplex:
    """Three-term complex P2 -> P1 -> P0 with d1 d2 = 0 by construction."""
    r0, r1 = rng.randint(1, 2), rng.randint(1, 3)
    d1 = Matrix.from_rows(ring, [[rng.randint(-3, 3) for _ in range(r1)] for _ in range(r0)], r1)
    k = kernel_basis(d1)
    d2 = k.scale(rng.choice([1, 2, 3])) if k.cols else Matrix.zeros(ring, r1, 0)
    ranks = {0: r0, 1: r1, 2: d2.cols}
    return ChainComplex(ring, ranks, {1: d1, 2: d2})


# construction


def test_d_squared_must_vanish():
    d1 = Matrix.from_rows(ZZ, [[1]])
    d2 = Matrix.from_rows(ZZ, [[1]])
    with pytest.raises(InvalidComplexError):
        ChainComplex(ZZ, {0: 1, 1: 1, 2: 1}, {1: d1, 2: d2})


def test_differential_shape_is_checked():
    with pytest.raises(InvalidComplexError):
        ChainComplex(ZZ, {0: 1, 1: 2}, {1: Matrix.from_rows(ZZ, [[1]])})


def test_chain_map_must_commute():
    with pytest.raises(InvalidChainMapError):
        ChainMap(mult(2), mult(2), {1: Matrix.from_rows(ZZ, [[1]]), 0: Matrix.from_rows(ZZ, [[3]])})


def test_payload_roundtrip_through_schema():
    c = mult(2)
    payload = ComplexPayload.model_validate(c.to_payload())
    assert payload.to_complex() == c
    assert c.to_payload()["d"]["1"]["entries"] == [["2"]]


def test_payload_with_bad_ring_is_rejected():
    with pytest.raises(InputError):
        ChainComplex.from_payload({"ring": "Fp:6", "ranks": {"0": 1}})


# homology


@pytest.mark.parametrize(
    "c,labels",
    [
        (mult(2), {0: "Z/2"}),
        (ChainComplex.zero(ZZ), {}),
        (mult(2, QQ), {}),
        (mult(2, F2), {0: "F_2", 1: "F_2"}),
        (mult(0), {0: "Z", 1: "Z"}),
    ],
)
def test_homology_examples(c, labels):
    assert homology(c).labels() == labels


def test_koszul_complex_of_coprime_pair_is_acyclic():
    c = ChainComplex(
        ZZ,
        {0: 1, 1: 2, 2: 1},
        {1: Matrix.from_rows(ZZ, [[2, 3]]), 2: Matrix.from_rows(ZZ, [[-3], [2]])},
    )
    assert homology(c).is_zero


def test_homology_presentation_classes():
    pres = homology_presentation(mult(4), 0)
    assert pres.module.label == "Z/4"
    assert pres.class_of((6,)) == (2,)


def test_induced_map_of_multiplication():
    f = ChainMap(point(), point(), {0: Matrix.from_rows(ZZ, [[3]])})
    assert induced_map(f, 0) == Matrix.from_rows(ZZ, [[3]])


# shift, tensor, dual


def test_shift_laws():
    c = mult(2)
    assert shift(c, 0) == c
    assert shift(point(), 2) == point(degree=2)
    assert shift(shift(c, 1), -1) == c
    assert shift(c, 1).d(2) == Matrix.from_rows(ZZ, [[-2]])


def test_tensor_with_unit_and_points():
    c = mult(2)
    assert homology(tensor(point(), c)).labels() == homology(c).labels()
    assert tensor(point(degree=1), point(degree=1)) == point(degree=2)


def test_tensor_of_coprime_multiplications_is_acyclic():
    assert homology(tensor(mult(2), mult(3))).is_zero


def test_tensor_of_equal_multiplications_has_tor():
    assert homology(tensor(mult(2), mult(2))).labels() == {0: "Z/2", 1: "Z/2"}


def test_tensor_rejects_mixed_rings():
    with pytest.raises(RingMismatchError):
        tensor(mult(2), mult(2, QQ))


def test_kunneth_over_a_field():
    rng = random.Random(17)
    for _ in range(6):
        a, b = random_complex(rng, F3), random_complex(rng, F3)
        ha, hb = homology(a), homology(b)
        expected: dict[int, int] = {}
        for i, m in ha.entries.items():
            for j, n in hb.entries.items():
                expected[i + j] = expected.get(i + j, 0) + m.free_rank * n.free_rank
        got = homology(tensor(a, b)).free_ranks()
        assert got == {k: v for k, v in expected.items() if v}


def test_dual_negates_degrees():
    d = dual(mult(2))
    assert d.ranks == {-1: 1, 0: 1}
    assert homology(d).labels() == {-1: "Z/2"}


# cone and truncation


def test_cone_examples():
    c = random_complex(random.Random(1))
    assert homology(cone(ChainMap.identity(c))).is_zero
    assert cone(ChainMap.zero(ChainComplex.zero(ZZ), c)) == c
    two = ChainMap(point(), point(), {0: Matrix.from_rows(ZZ, [[2]])})
    assert homology(cone(two)).labels() == {0: "Z/2"}


def test_cone_euler_characteristic_is_additive():
    rng = random.Random(23)
    for _ in range(8):
        c = random_complex(rng)
        f = ChainMap(c, c, {i: Matrix.scalar(ZZ, r, rng.randint(-2, 2)) for i, r in c.ranks.items()})
        assert euler_characteristic(cone(f)) == euler_characteristic(c) - euler_characteristic(c)
        assert long_exact_sequence_check(f)


def test_mapping_cylinder_projection_is_a_quasi_isomorphism():
    f = ChainMap(point(), mult(2), {0: Matrix.from_rows(ZZ, [[1]])})
    cyl = mapping_cylinder(f)
    assert is_quasi_iso(cyl.projection)
    assert cyl.inclusion.is_split_injective()
    assert cyl.projection.compose(cyl.inclusion) == f


@pytest.mark.parametrize(
    "c,n,labels",
    [
        (point(), 0, {0: "Z"}),
        (mult(2), 1, {}),
        (ChainComplex(ZZ, {0: 1, -1: 1}), 0, {0: "Z"}),
        (mult(0), 1, {1: "Z"}),
    ],
)
def test_truncation_examples(c, n, labels):
    t = truncate_connective(c, n)
    assert homology(t).labels() == labels
    assert all(i >= n for i in t.ranks)


def test_truncation_is_idempotent_and_keeps_upper_homology():
    rng = random.Random(29)
    for _ in range(8):
        c = random_complex(rng)
        for n in range(3):
            t = truncate_connective(c, n)
            assert truncate_connective(t, n) == t
            upper = {i: m for i, m in homology(c).labels().items() if i >= n}
            assert homology(t).labels() == upper


def test_truncation_keeps_the_truncation_marker():
    c = ChainComplex(ZZ, {0: 1, 1: 1, 2: 1}, {}, truncated_above=0)
    t = truncate_connective(c, 2)
    assert t.ranks == {2: 1}
    assert t.truncated_above == 0
    assert truncate_connective(mult(2), 1).truncated_above is None


# quasi-isomorphisms


def test_quasi_iso_examples():
    assert is_quasi_iso(ChainMap.identity(mult(3)))
    acyclic = cone(ChainMap.identity(point()))
    assert is_quasi_iso(ChainMap.zero(ChainComplex.zero(ZZ), acyclic))
    assert not is_quasi_iso(ChainMap(point(), point(), {0: Matrix.from_rows(ZZ, [[2]])}))


def test_minimal_model_realizes_table():
    table = HomologyTable.from_labels(ZZ, {0: "Z+Z/2", 2: "Z/6", 3: "Z^2"})
    model = minimal_model(table)
    assert homology(model).labels() == table.labels()


def test_direct_sum_adds_homology():
    s = direct_sum(mult(2), mult(3))
    assert homology(s).labels() == {0: "Z/6"}


def test_change_ring_of_free_complexes():
    assert homology(change_ring(mult(6), F2)).labels() == {0: "F_2", 1: "F_2"}
    assert homology(change_ring(mult(6), QQ)).labels() == {}
    assert homology(change_ring(mult(2), F3)).labels() == {}
    assert change_ring(mult(6), ZZ) == mult(6)
    with pytest.raises(RingMismatchError):
        change_ring(mult(1, F2), ZZ)
