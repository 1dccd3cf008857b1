import pytest

from app.cartan import parse_type
from app.errors import DomainError
from app.oracle import (
    SchubertPolyBasis,
    divided_difference,
    grassmannian_cosets,
    inversions,
    left_descents,
    oracle_steenrod,
    oracle_table,
    reduced_power,
    reduced_word,
    right_descents,
    schubert_coefficients,
    schubert_polynomial,
    type_a_rank,
    word_to_permutation,
)
from app.poly import SparsePoly
from app.weyl import enumerate_cosets

A6_PARABOLIC = (1, 2, 4, 5, 6)


def x(i, n=3, modulus=None):
    return SparsePoly.variable(i, n, modulus)


def perm(word, n=7):
    return word_to_permutation(word, n)


# -----------------------------------------------------------------------------
# Permutations
# -----------------------------------------------------------------------------
def test_permutation_helpers():
    assert word_to_permutation((1, 2), 3) == (2, 3, 1)
    assert word_to_permutation((), 3) == (1, 2, 3)
    assert inversions((3, 2, 1)) == 3
    assert right_descents((2, 3, 1)) == [2]
    assert left_descents((2, 3, 1)) == [1]
    with pytest.raises(DomainError):
        word_to_permutation((3,), 3)


@pytest.mark.parametrize("w", [(3, 1, 4, 2), (4, 3, 2, 1), (1, 2, 3, 4), (2, 4, 1, 3)])
def test_reduced_word_round_trip(w):
    word = reduced_word(w)
    assert len(word) == inversions(w)
    assert word_to_permutation(word, 4) == w


def test_grassmannian_cosets():
    graded = grassmannian_cosets(4, {1, 3})
    assert [len(graded[r]) for r in sorted(graded)] == [1, 1, 2, 1, 1]
    assert sum(len(g) for g in grassmannian_cosets(4, ()).values()) == 24
    with pytest.raises(DomainError):
        grassmannian_cosets(4, {4})


# -----------------------------------------------------------------------------
# Divided differences and Schubert polynomials
# -----------------------------------------------------------------------------
def test_divided_difference():
    x1, x2 = x(1, 2), x(2, 2)
    assert divided_difference(1, x1) == SparsePoly.constant(1, 2)
    assert divided_difference(1, x1 ** 2) == x1 + x2
    assert divided_difference(1, x1 ** 2 * x2) == x1 * x2
    assert divided_difference(1, x2 ** 2) == -(x1 + x2)
    assert not divided_difference(1, x1 + x2)
    with pytest.raises(DomainError):
        divided_difference(2, x1)


def test_schubert_polynomials_of_s3():
    x1, x2 = x(1), x(2)
    expected = {
        (1, 2, 3): SparsePoly.constant(1, 3),
        (2, 1, 3): x1,
        (1, 3, 2): x1 + x2,
        (2, 3, 1): x1 * x2,
        (3, 1, 2): x1 ** 2,
        (3, 2, 1): x1 ** 2 * x2,
    }
    basis = SchubertPolyBasis.build(3)
    assert len(basis.elements) == 6
    for w, poly in expected.items():
        assert basis[w] == poly
        assert schubert_polynomial(w) == poly


def test_schubert_polynomial_rejects_non_permutation():
    with pytest.raises(DomainError):
        schubert_polynomial((1, 1, 3))


def test_schubert_coefficients_recover_basis():
    basis = SchubertPolyBasis.build(4)
    graded = grassmannian_cosets(4, ())
    for r, grade in graded.items():
        for v in grade:
            assert schubert_coefficients(basis[v], grade) == {w: int(w == v) for w in grade}


def test_reduced_power_is_frobenius_on_top_degree():
    x1, x2 = x(1, 2, 3), x(2, 2, 3)
    assert reduced_power(x1, 3, 1) == x1 ** 3
    assert reduced_power(x1 * x2, 3, 2) == x1 ** 3 * x2 ** 3
    assert reduced_power(x1 * x2, 3, 1) == x1 ** 3 * x2 + x1 * x2 ** 3
    assert not reduced_power(x1, 3, 2)
    assert reduced_power(x1 ** 2, 3, 0) == x1 ** 2


# -----------------------------------------------------------------------------
# Oracle
# -----------------------------------------------------------------------------
def test_a6_examples():
    basis = SchubertPolyBasis(7, modulus=5)
    assert oracle_steenrod(7, A6_PARABOLIC, 5, 1, perm((3,)), basis=basis) == {
        perm((1, 2, 5, 4, 3)): 1,
        perm((2, 6, 5, 4, 3)): 4,
    }
    top = perm((4, 3, 2, 1, 5, 4, 3, 2, 6, 5, 4, 3))
    assert oracle_steenrod(7, A6_PARABOLIC, 3, 4, perm((1, 2, 4, 3))) == {top: 1}


def test_oracle_edge_cases():
    u = perm((3,))
    assert oracle_steenrod(7, A6_PARABOLIC, 5, 0, u) == {u: 1}
    # past the top degree
    assert oracle_steenrod(4, (), 3, 4, (2, 1, 3, 4)) == {}
    with pytest.raises(DomainError):
        oracle_steenrod(7, A6_PARABOLIC, 5, 1, perm((1,)))


def test_oracle_table_keys():
    table = oracle_table(3, (), 2, [1])
    # S_3: grades 1,2,2,1; Sq^2 raises length by one
    assert len(table) == 1 * 2 + 2 * 2 + 2 * 1
    assert set(table.values()) <= {0, 1}
    # Sq^2 x1 = x1^2 = S_312
    assert table[(1, (2, 1, 3), (3, 1, 2))] == 1
    assert table[(1, (2, 1, 3), (2, 3, 1))] == 0


def test_type_a_rank():
    assert type_a_rank(enumerate_cosets(parse_type("A3"), (2,))) == 4
    with pytest.raises(DomainError):
        type_a_rank(enumerate_cosets(parse_type("G2")))
