import random

import pytest
import sympy

from app.core.errors import InputError, RingMismatchError
from app.services.linalg import (
    FgModule,
    Matrix,
    QQ,
    RingSpec,
    ZZ,
    cokernel,
    column_space_basis,
    hermite_normal_form,
    invariant_factors,
    kernel_basis,
    left_inverse,
    rank,
    smith_normal_form,
    solve,
)

F5 = RingSpec.prime_field(5)


def _random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 6) -> Matrix:
    return Matrix.from_rows(ZZ, [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols)


def _random_unimodular(rng: random.Random, n: int) -> Matrix:
    u = Matrix.identity(ZZ, n)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        e = Matrix.from_sparse(ZZ, n, n, [(k, k, 1) for k in range(n)] + [(i, j, rng.randint(-3, 3))])
        u = e @ u
    return u


def _det(m: Matrix) -> int:
    return int(sympy.Matrix(m.to_lists()).det())


# rings


@pytest.mark.parametrize(
    "label,kind,p",
    [("Z", "Z", None), ("Q", "Q", None), ("Fp:7", "Fp", 7), ("F_3", "Fp", 3)],
)
def test_ring_labels_parse(label, kind, p):
    ring = RingSpec.parse(label)
    assert ring.kind == kind
    assert ring.p == p


@pytest.mark.parametrize("label", ["Fp:4", "Fp:1", "R", "", "Fp:x"])
def test_bad_ring_labels_are_input_errors(label):
    with pytest.raises(InputError):
        RingSpec.parse(label)


def test_prime_field_reduces_entries():
    m = Matrix.from_rows(F5, [[7, -1], [10, 3]])
    assert m.to_lists() == [[2, 4], [0, 3]]


# smith normal form


def test_snf_of_diagonal_matrix_is_itself():
    m = Matrix.from_rows(ZZ, [[2, 0], [0, 4]])
    u, d, v = smith_normal_form(m)
    assert d == m
    assert u == Matrix.identity(ZZ, 2)
    assert v == Matrix.identity(ZZ, 2)


def test_snf_reduces_to_divisibility_chain():
    m = Matrix.from_rows(ZZ, [[2, 4], [6, 8]])
    u, d, v = smith_normal_form(m)
    assert d == Matrix.from_rows(ZZ, [[2, 0], [0, 4]])
    assert u @ m @ v == d


def test_snf_of_empty_matrix():
    u, d, v = smith_normal_form(Matrix.zeros(ZZ, 0, 0))
    assert u.shape == d.shape == v.shape == (0, 0)


def test_snf_random_matrices_are_exact_and_unimodular():
    rng = random.Random(7)
    for _ in range(15):
        m = _random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        u, d, v = smith_normal_form(m)
        assert u @ m @ v == d
        assert _det(u) in (1, -1)
        assert _det(v) in (1, -1)
        diagonal = [d[i, i] for i in range(min(d.rows, d.cols)) if d[i, i] != 0]
        assert all(x > 0 for x in diagonal)
        assert all(b % a == 0 for a, b in zip(diagonal, diagonal[1:]))
        off = [d[i, j] for i in range(d.rows) for j in range(d.cols) if i != j]
        assert not any(off)


def test_invariant_factors_agree_with_dense_snf():
    rng = random.Random(11)
    for _ in range(10):
        m = _random_matrix(rng, 4, 5, bound=9)
        _, d, _ = smith_normal_form(m)
        dense = tuple(d[i, i] for i in range(min(d.rows, d.cols)) if d[i, i] != 0)
        assert invariant_factors(m) == dense


# cokernel


@pytest.mark.parametrize(
    "ring,rows,free_rank,torsion",
    [
        (ZZ, [[2]], 0, (2,)),
        (F5, [[0]], 1, ()),
        (ZZ, [[2, 0], [0, 0]], 1, (2,)),
        (ZZ, [[2, 4], [6, 8]], 0, (2, 4)),
        (QQ, [[2, 4], [6, 8]], 0, ()),
    ],
)
def test_cokernel_examples(ring, rows, free_rank, torsion):
    c = cokernel(Matrix.from_rows(ring, rows))
    assert c.free_rank == free_rank
    assert c.torsion == torsion


def test_cokernel_is_invariant_under_unimodular_change_of_basis():
    rng = random.Random(3)
    for _ in range(10):
        m = _random_matrix(rng, 3, 3)
        u, v = _random_unimodular(rng, 3), _random_unimodular(rng, 3)
        assert cokernel(u @ m @ v) == cokernel(m)


# kernels and solving


@pytest.mark.parametrize(
    "rows,expected",
    [
        ([[1, 1]], [[1], [-1]]),
        ([[2, 4]], [[2], [-1]]),
        ([[0, 0], [0, 0]], [[1, 0], [0, 1]]),
    ],
)
def test_kernel_basis_examples(rows, expected):
    assert kernel_basis(Matrix.from_rows(ZZ, rows)) == Matrix.from_rows(ZZ, expected)


def test_kernel_basis_is_saturated_and_complements_rank():
    rng = random.Random(5)
    for _ in range(15):
        m = _random_matrix(rng, rng.randint(1, 3), rng.randint(1, 5))
        k = kernel_basis(m)
        assert (m @ k).is_zero()
        assert k.cols + rank(m) == m.cols
        # saturated: target / image of the kernel inclusion is free
        assert cokernel(k).is_free


def test_column_space_and_hermite_form_over_a_field():
    m = Matrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6]])
    assert column_space_basis(m).cols == 1
    assert hermite_normal_form(m).to_lists() == [[1, 2, 3]]


def test_solve_finds_exact_integral_solutions():
    a = Matrix.from_rows(ZZ, [[2, 0], [0, 3]])
    assert solve(a, Matrix.from_rows(ZZ, [[4], [9]])) == Matrix.from_rows(ZZ, [[2], [3]])
    assert solve(a, Matrix.from_rows(ZZ, [[1], [0]])) is None


def test_solve_rejects_mixed_rings():
    with pytest.raises(RingMismatchError):
        solve(Matrix.identity(ZZ, 1), Matrix.identity(QQ, 1))


def test_left_inverse_exists_only_for_split_injections():
    split = Matrix.from_rows(ZZ, [[1], [2]])
    inv = left_inverse(split)
    assert inv is not None and inv @ split == Matrix.identity(ZZ, 1)
    assert left_inverse(Matrix.from_rows(ZZ, [[2]])) is None
    assert left_inverse(Matrix.from_rows(QQ, [[2]])) is not None


def test_matrix_payload_uses_decimal_strings():
    m = Matrix.from_rows(ZZ, [[1, -2], [30, 4]])
    payload = m.to_payload()
    assert payload["entries"] == [["1", "-2"], ["30", "4"]]
    assert Matrix.from_payload(payload) == m


def test_matrix_payload_shape_is_checked():
    with pytest.raises(InputError):
        Matrix.from_payload({"ring": "Z", "rows": 2, "cols": 1, "entries": [["1"]]})


# modules


@pytest.mark.parametrize(
    "module,label",
    [
        (FgModule(ZZ, 2, (2,)), "Z^2+Z/2"),
        (FgModule(RingSpec.prime_field(3), 1), "F_3"),
        (FgModule(ZZ, 0, (2, 2, 2, 2, 2)), "(Z/2)^5"),
        (FgModule(ZZ), "0"),
    ],
)
def test_module_labels_parse_back(module, label):
    assert module.label == label
    assert FgModule.parse(label, module.ring) == module


def test_module_torsion_must_be_a_divisibility_chain():
    with pytest.raises(InputError):
        FgModule(ZZ, 0, (4, 2))
    assert FgModule.from_factors(ZZ, 0, [4, 2]).torsion == (2, 4)
    assert FgModule.from_factors(ZZ, 0, [2, 3]).torsion == (6,)


def test_field_modules_restrict_to_elementary_abelian_groups():
    assert FgModule(RingSpec.prime_field(2), 3).restrict_to_integers().label == "(Z/2)^3"
    with pytest.raises(InputError):
        FgModule(QQ, 0, (2,))
