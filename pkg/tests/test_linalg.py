import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latmean.errors import DegeneracyError
from latmean.linalg import (
    column_hnf,
    det_bareiss,
    det_fraction,
    hnf,
    hnf_lattice_index,
    invert_unimodular,
    mat_mul,
    rank_mod_p,
    rank_rational,
    rref,
    snf_with_transforms,
)

small_int = st.integers(-30, 30)


def random_unimodular(rng, n):
    M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.randint(-3, 3)
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return M


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small_int, min_size=3, max_size=3),
                min_size=2, max_size=4))
def test_hnf_preserves_row_lattice(rows):
    H = hnf(rows)
    # every original row reduces to zero against H, and conversely H's rows
    # are integer combinations of the input (checked through a double HNF)
    assert hnf(rows + H) == H


def test_hnf_index():
    assert hnf_lattice_index([[2, 0], [0, 3]], 2) == 6
    assert hnf_lattice_index([[2, 1], [0, 1]], 2) == 2
    with pytest.raises(DegeneracyError):
        hnf_lattice_index([[1, 2], [2, 4]], 2)


def test_det_bareiss():
    assert det_bareiss([[2, 1], [1, 1]]) == 1
    assert det_bareiss([[1, 2, 3], [4, 5, 6], [7, 8, 9]]) == 0
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(1, 4)
        M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        exact = det_fraction([[Fraction(x) for x in row] for row in M])
        assert det_bareiss(M) == exact


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 10**6))
def test_snf_reassembles(m, n, seed):
    rng = random.Random(seed)
    A = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)]
    S, U, V = snf_with_transforms(A)
    assert mat_mul(mat_mul(U, A), V) == S
    assert abs(det_bareiss(U)) == 1
    assert abs(det_bareiss(V)) == 1
    diag = [S[i][i] for i in range(min(m, n))]
    for i in range(len(diag) - 1):
        if diag[i + 1]:
            assert diag[i] != 0 and diag[i + 1] % diag[i] == 0
        assert diag[i] >= 0
    # off-diagonal zero
    for i in range(m):
        for j in range(n):
            if i != j:
                assert S[i][j] == 0


def test_snf_invariant_under_unimodular_ops():
    rng = random.Random(7)
    A = [[1, 2, 3], [0, 4, 5]]
    S0, _, _ = snf_with_transforms(A)
    for _ in range(10):
        U = random_unimodular(rng, 2)
        V = random_unimodular(rng, 3)
        S1, _, _ = snf_with_transforms(mat_mul(mat_mul(U, A), V))
        assert S0 == S1


def test_invert_unimodular():
    rng = random.Random(1)
    for n in (1, 2, 3, 4):
        U = random_unimodular(rng, n)
        Ui = invert_unimodular(U)
        assert mat_mul(U, Ui) == [[int(i == j) for j in range(n)]
                                  for i in range(n)]


def test_rank_mod_p_and_rational():
    assert rank_mod_p([[2, 4], [6, 8]], 2) == 0
    assert rank_mod_p([[1, 2], [3, 4]], 2) == 2
    assert rank_mod_p([[1, 2], [2, 4]], 5) == 1
    assert rank_rational([[1, 2], [2, 4]]) == 1
    assert rank_rational([[Fraction(1, 2), 1], [1, 3]]) == 2


def test_rref_shape():
    M, piv = rref([[2, 4, 6], [1, 2, 4]])
    assert piv == [0, 2]
    assert M[0][0] == 1 and M[1][2] == 1 and M[0][2] == 0


def test_column_hnf_canonicalizes_right_equivalence():
    rng = random.Random(3)
    A = [[2, 1], [0, 3]]
    key = column_hnf(A)
    for _ in range(10):
        U = random_unimodular(rng, 2)
        assert column_hnf(mat_mul(A, U)) == key
