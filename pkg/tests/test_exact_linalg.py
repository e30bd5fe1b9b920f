from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essential_chow.exact_linalg import (
    clear_denominators,
    content,
    det_exact,
    inverse_exact,
    is_skew,
    matmul_exact,
    nullspace_exact,
    pfaffian_exact,
    rank_exact,
    rref_exact,
    singular_values,
    sparse_nullspace,
    sparse_rank,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def skew_matrices(draw, max_half=6):
    n = 2 * draw(st.integers(1, max_half))
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(small)
            m[i][j], m[j][i] = v, -v
    return m


def test_pfaffian_2x2_sign():
    assert pfaffian_exact([[0, 5], [-5, 0]]) == 5


def test_pfaffian_4x4_formula():
    a, b, c, d, e, f = 2, 3, 5, 7, 11, 13
    m = [[0, a, b, c], [-a, 0, d, e], [-b, -d, 0, f], [-c, -e, -f, 0]]
    assert pfaffian_exact(m) == a * f - b * e + c * d


@settings(max_examples=60, deadline=None)
@given(skew_matrices())
def test_pfaffian_squared_is_determinant(m):
    assert pfaffian_exact(m) ** 2 == det_exact(m)


@settings(max_examples=30, deadline=None)
@given(skew_matrices(max_half=4), st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool))
def test_pfaffian_homogeneity(m, c):
    scaled = [[c * x for x in row] for row in m]
    assert pfaffian_exact(scaled) == c ** (len(m) // 2) * pfaffian_exact(m)


def test_pfaffian_rejects_bad_input():
    with pytest.raises(ValueError):
        pfaffian_exact([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]])
    with pytest.raises(ValueError):
        pfaffian_exact([[0, 1], [1, 0]])


def test_pfaffian_zero_matrix():
    assert pfaffian_exact([[0] * 4 for _ in range(4)]) == 0


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4))
def test_det_matches_numpy(m):
    assert abs(float(det_exact(m)) - np.linalg.det(np.array(m, dtype=float))) < 1e-6 * (1 + abs(float(det_exact(m))))


@settings(max_examples=60, deadline=None)
@given(matrices(4, 6))
def test_rank_plus_nullity(m):
    r = rank_exact(m)
    kernel = nullspace_exact(m)
    assert r + len(kernel) == 6
    for v in kernel:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


@settings(max_examples=60, deadline=None)
@given(matrices(5, 7))
def test_sparse_and_dense_agree(m):
    rows = [{j: x for j, x in enumerate(row) if x} for row in m]
    assert sparse_rank(rows) == rank_exact(m)
    kernel = sparse_nullspace(rows, 7)
    assert len(kernel) == 7 - rank_exact(m)
    for v in kernel:
        assert all(sum(row[j] * v.get(j, 0) for j in range(7)) == 0 for row in m)


def test_rank_of_known_matrices():
    assert rank_exact([[1, 2], [2, 4]]) == 1
    assert rank_exact([[0, 0], [0, 0]]) == 0
    assert rank_exact([[Fraction(1, 3), 1], [1, 3]]) == 1


def test_rref_and_inverse():
    m = [[2, 1], [1, 1]]
    red, piv = rref_exact(m)
    assert piv == [0, 1] and red == [[1, 0], [0, 1]]
    inv = inverse_exact(m)
    assert matmul_exact(m, inv) == [[1, 0], [0, 1]]
    with pytest.raises(ZeroDivisionError):
        inverse_exact([[1, 2], [2, 4]])


def test_clear_denominators_and_content():
    ints, d = clear_denominators([[Fraction(1, 2), Fraction(1, 3)]])
    assert d == 6 and ints == [[3, 2]]
    assert content([6, -9, 0]) == 3 and content([]) == 0


def test_is_skew():
    assert is_skew([[0, 1], [-1, 0]])
    assert not is_skew([[1, 1], [-1, 0]])


def test_singular_values():
    s = singular_values([[3, 0], [0, 4]])
    assert np.allclose(s, [4, 3])
    with pytest.raises(ValueError):
        singular_values([[np.nan, 0], [0, 1]])
