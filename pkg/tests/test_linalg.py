from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from flatland.linalg import (
    Backend, as_array, det, harmonize, infer_backend, inv, is_exact, is_zero, nullspace, rank, rref, to_float,
)

small = st.integers(-6, 6)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_backend_inference():
    assert infer_backend([1, 2, 3]) is Backend.EXACT
    assert infer_backend(["1/2", 3]) is Backend.EXACT
    assert infer_backend([1.0, 2, 3]) is Backend.FLOAT
    assert is_exact(as_array([1, "2/3", 4]))
    assert as_array([1, "2/3"])[1] == Fraction(2, 3)


def test_harmonize_promotes_to_float():
    a, b = harmonize(as_array([1, 2]), np.array([1.5, 2.0]))
    assert not is_exact(a) and not is_exact(b)


@settings(max_examples=200, deadline=None)
@given(matrices(4, 4))
def test_det_matches_sympy(rows):
    assert det(as_array(rows)) == sympy.Matrix(rows).det()


@settings(max_examples=200, deadline=None)
@given(matrices(3, 5))
def test_rank_and_nullspace_match_sympy(rows):
    M = as_array(rows)
    assert rank(M) == sympy.Matrix(rows).rank()
    basis = nullspace(M)
    assert len(basis) == 5 - rank(M)
    for v in basis:
        assert all(c == 0 for c in M.dot(v))


def test_rank_of_rational_object_matrix():
    # int entries divided by int pivots must stay exact
    M = as_array([[2, 4, 6], [1, 3, 5], [3, 7, 11]])
    assert rank(M) == 2
    R, piv = rref(M)
    assert piv == [0, 1]
    assert R[2].tolist() == [0, 0, 0]


def test_inverse_exact_and_singular():
    M = as_array([[2, 1], [7, 4]])
    assert (inv(M).dot(M) == as_array([[1, 0], [0, 1]])).all()
    with pytest.raises(np.linalg.LinAlgError):
        inv(as_array([[1, 2], [2, 4]]))


def test_float_rank_tolerance():
    M = np.array([[1.0, 2.0], [2.0, 4.0 + 1e-14]])
    assert rank(M) == 1
    assert is_zero(1e-13, 1.0)
    assert not is_zero(1e-6, 1.0)
    assert to_float(as_array(["1/4"]))[0] == 0.25
