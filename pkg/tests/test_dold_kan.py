import random

import pytest

from app.core.errors import CutoffError, InputError, NonConnectiveError
from app.services.complexes import ChainComplex, homology
from app.services.dold_kan import (
    KoszulInput,
    PowerFunctorKind,
    admissible_sequences,
    derived_power,
    derived_power_simplicial,
    dk_gamma,
    goerss_ranks,
    koszul_power,
    lsym_total,
    normalize,
    power_on_free,
)
from app.services.linalg import Matrix, QQ, RingSpec, ZZ
from app.services.suite.cases import (
    decalage_failures,
    random_family,
    tor_amplitude_failures,
    tor_amplitude_lower,
)

F2 = RingSpec.prime_field(2)


def line(degree: int, ring: RingSpec = ZZ) -> ChainComplex:
    return ChainComplex.concentrated(ring, degree)


def mult(n: int, ring: RingSpec = ZZ) -> ChainComplex:
    return ChainComplex.two_term(Matrix.from_rows(ring, [[n]]), 1)


def labels_of(kind: str, r: int, c: ChainComplex, cutoff: int = 10) -> dict:
    return homology(derived_power(PowerFunctorKind(kind, r), c, cutoff)).labels()


# Dold-Kan


@pytest.mark.parametrize(
    "degree,level_ranks",
    [
        (0, [1, 1, 1, 1]),
        (1, [0, 1, 2, 3]),
        (2, [0, 0, 1, 3]),
    ],
)
def test_gamma_level_ranks(degree, level_ranks):
    s = dk_gamma(line(degree), 3)
    assert [s.ranks[n] for n in range(4)] == level_ranks


def test_gamma_rejects_non_connective_input():
    with pytest.raises(NonConnectiveError):
        dk_gamma(line(-1), 2)


def test_normalization_recovers_the_complex():
    c = mult(2)
    n = normalize(dk_gamma(c, 3), 1)
    assert n.ranks == c.ranks
    assert homology(n).labels() == {0: "Z/2"}
    assert normalize(dk_gamma(line(0), 2), 2).ranks == {0: 1}


def test_normalize_cutoff_beyond_levels_is_an_error():
    with pytest.raises(CutoffError):
        normalize(dk_gamma(line(1), 2), 3)


# power functors on free modules


@pytest.mark.parametrize(
    "kind,r,rows,expected",
    [
        ("sym", 2, [[2]], [[4]]),
        ("div", 2, [[2]], [[4]]),
        ("sym", 2, [[1, 1]], [[1, 1, 1]]),
        ("div", 2, [[1, 1]], [[1, 2, 1]]),
    ],
)
def test_power_on_free_examples(kind, r, rows, expected):
    m = Matrix.from_rows(ZZ, rows)
    assert power_on_free(PowerFunctorKind(kind, r), m) == Matrix.from_rows(ZZ, expected)


def test_exterior_square_of_a_line_is_empty():
    assert power_on_free(PowerFunctorKind("ext", 2), Matrix.from_rows(ZZ, [[5]])).shape == (0, 0)


@pytest.mark.parametrize("kind", ["sym", "ext", "div"])
@pytest.mark.parametrize("r", [2, 3])
def test_power_on_free_is_functorial(kind, r):
    rng = random.Random(r)
    k = PowerFunctorKind(kind, r)
    for _ in range(4):
        a = Matrix.from_rows(ZZ, [[rng.randint(-2, 2) for _ in range(3)] for _ in range(2)])
        b = Matrix.from_rows(ZZ, [[rng.randint(-2, 2) for _ in range(2)] for _ in range(3)])
        assert power_on_free(k, a @ b) == power_on_free(k, a) @ power_on_free(k, b)
    assert power_on_free(k, Matrix.identity(ZZ, 3)) == Matrix.identity(
        ZZ, power_on_free(k, Matrix.identity(ZZ, 3)).rows
    )


def test_unknown_functor_name():
    with pytest.raises(InputError):
        PowerFunctorKind.parse("cube", 2)
    assert PowerFunctorKind.parse("Lambda", 2) == PowerFunctorKind("ext", 2)


# derived powers


@pytest.mark.parametrize(
    "kind,r,c,labels",
    [
        ("sym", 2, line(1), {}),
        ("sym", 2, line(2), {4: "Z"}),
        ("sym", 3, line(2), {6: "Z"}),
        ("ext", 2, line(1), {2: "Z"}),
        ("antisym", 2, line(0), {0: "Z/2"}),
        ("sym", 0, mult(2), {0: "Z"}),
    ],
)
def test_derived_power_examples(kind, r, c, labels):
    assert labels_of(kind, r, c) == labels


def test_antisym_matches_sym_over_f2_and_exterior_over_q():
    for r in (2, 3):
        assert labels_of("antisym", r, line(1, F2)) == labels_of("sym", r, line(1, F2))
        assert labels_of("antisym", r, line(0, QQ)) == labels_of("ext", r, line(0, QQ))


def test_derived_power_rejects_bad_input():
    with pytest.raises(NonConnectiveError):
        derived_power(PowerFunctorKind("sym", 2), line(-1), 4)
    with pytest.raises(CutoffError):
        derived_power(PowerFunctorKind("sym", 2), line(1), -1)


def test_truncated_result_is_flagged():
    result = derived_power(PowerFunctorKind("sym", 3), line(2), 3)
    assert result.truncated_above == 3


@pytest.mark.parametrize("kind", ["sym", "ext", "div"])
def test_fast_path_matches_simplicial_route(kind):
    c = mult(2)
    k = PowerFunctorKind(kind, 2)
    fast = homology(derived_power(k, c, 3)).labels()
    slow = homology(derived_power_simplicial(k, c, 3)).labels()
    assert {d: m for d, m in fast.items() if d <= 3} == {d: m for d, m in slow.items() if d <= 3}


@pytest.mark.parametrize("kind", ["sym", "ext"])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_koszul_model_agrees_with_dold_puppe(kind, r):
    m = Matrix.from_rows(ZZ, [[2, 0], [1, 3]])
    c = ChainComplex.two_term(m, 1)
    koszul = koszul_power(kind, r, KoszulInput.from_matrix(m))
    assert homology(koszul).labels() == labels_of(kind, r, c)


def test_koszul_power_has_no_divided_model():
    with pytest.raises(InputError):
        koszul_power("div", 2, KoszulInput.from_matrix(Matrix.from_rows(ZZ, [[2]])))


# total LSym


def test_lsym_total_of_points():
    assert lsym_total(line(0), 3, 10).homology_labels() == {w: {0: "Z"} for w in range(4)}
    assert lsym_total(line(1, F2), 2, 10).homology_labels() == {0: {0: "F_2"}, 1: {1: "F_2"}}
    assert lsym_total(ChainComplex.zero(ZZ), 3, 10).homology_labels() == {0: {0: "Z"}}


def test_lsym_total_of_a_divided_power_line():
    table = lsym_total(line(2), 3, 10).homology_labels()
    assert table == {0: {0: "Z"}, 1: {2: "Z"}, 2: {4: "Z"}, 3: {6: "Z"}}


def test_lsym_total_exponential_law_over_a_field():
    a, b = line(0, F2), line(1, F2)
    total = lsym_total(ChainComplex(F2, {0: 1, 1: 1}), 3, 6)
    for w in range(4):
        expected: dict[int, int] = {}
        for i in range(w + 1):
            left = homology(derived_power(PowerFunctorKind("sym", i), a, 6)).free_ranks()
            right = homology(derived_power(PowerFunctorKind("sym", w - i), b, 6)).free_ranks()
            for d1, k1 in left.items():
                for d2, k2 in right.items():
                    expected[d1 + d2] = expected.get(d1 + d2, 0) + k1 * k2
        assert homology(total[w]).free_ranks() == expected


# Goerss over F_2


def test_lsym_of_f2_line_in_degree_one_vanishes_above_weight_one():
    for r in range(2, 5):
        assert labels_of("sym", r, line(1, F2)) == {}


def test_goerss_enumerator_matches_engine_in_low_weights():
    expected = goerss_ranks(2, 2, 6)
    assert expected == {1: {2: 1}, 2: {4: 1}}
    for r in (1, 2):
        ranks = homology(derived_power(PowerFunctorKind("sym", r), line(2, F2), 6)).free_ranks()
        assert ranks == expected[r]


def test_admissible_sequences_for_small_n():
    assert [c.sequence for c in admissible_sequences(1, 10)] == [()]
    seqs = {c.sequence for c in admissible_sequences(2, 10)}
    assert (2,) in seqs and (4, 2) in seqs and (3,) not in seqs


# property families


@pytest.mark.parametrize(
    "a,r,lower",
    [(0, 1, 0), (0, 3, 0), (1, 2, 2), (1, 3, 3), (2, 2, 4), (3, 2, 5), (2, 1, 2)],
)
def test_tor_amplitude_lower_bound(a, r, lower):
    assert tor_amplitude_lower(a, r) == lower


def test_decalage_on_a_fixed_complex():
    c = ChainComplex.two_term(Matrix.from_rows(ZZ, [[2, 1], [0, 2]]), 1)
    for r in (1, 2):
        assert decalage_failures(c, r) == []


@pytest.mark.slow
def test_decalage_random_family():
    failures = [f for c in random_family(20, 0) for r in range(1, 4) for f in decalage_failures(c, r)]
    assert failures == []


@pytest.mark.slow
def test_tor_amplitude_random_families():
    failures = [f for c in random_family(20, 0) for r in range(1, 4) for f in tor_amplitude_failures(c, 0, r)]
    failures += [
        f for c in random_family(10, 2, salt=1000) for r in range(1, 3) for f in tor_amplitude_failures(c, 2, r)
    ]
    assert failures == []
