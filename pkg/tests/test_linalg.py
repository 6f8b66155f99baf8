from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from descentkit.linalg import (DimensionError, Mat, fmt_rational, frac, hstack, intersect,
                               inverse, is_invertible, kernel_basis, kron, image_basis,
                               mat_from_json, mat_to_json, quotient_pair, rank, same_span,
                               solve, span_sum)

import oracles


def mats(max_rows=5, max_cols=5):
    def build(shape):
        r, c = shape
        return st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c),
                        min_size=r, max_size=r).map(lambda rows: Mat.from_rows(rows, cols=c))
    return st.tuples(st.integers(0, max_rows), st.integers(0, max_cols)).flatmap(build)


@settings(max_examples=80, deadline=None)
@given(mats())
def test_rank_matches_sympy(m):
    assert rank(m) == oracles.rank(m)


@settings(max_examples=80, deadline=None)
@given(mats())
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert k.cols + rank(m) == m.cols
    assert (m @ k).is_zero()
    assert rank(k) == k.cols


@settings(max_examples=60, deadline=None)
@given(mats())
def test_image_basis_spans(m):
    b = image_basis(m)
    assert b.cols == rank(m)
    assert same_span(b, m)


@settings(max_examples=60, deadline=None)
@given(mats())
def test_quotient_pair(m):
    n = m.rows
    P, C = quotient_pair(n, m)
    assert (P @ m).is_zero()
    assert P @ C == Mat.identity(n - rank(m))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse(rows):
    m = Mat.from_rows(rows)
    if oracles.rank(m) == m.rows:
        inv = inverse(m)
        assert m @ inv == Mat.identity(m.rows)
        assert oracles.to_sympy(inv) == oracles.to_sympy(m).inv()
    else:
        assert not is_invertible(m)
        with pytest.raises(ValueError):
            inverse(m)


@settings(max_examples=40, deadline=None)
@given(mats(3, 3), mats(3, 3))
def test_kron_matches_sympy(a, b):
    from sympy.physics.quantum import TensorProduct
    k = kron(a, b)
    assert k.shape == (a.rows * b.rows, a.cols * b.cols)
    if a.rows and a.cols and b.rows and b.cols:
        assert oracles.to_sympy(k) == TensorProduct(oracles.to_sympy(a), oracles.to_sympy(b))


@settings(max_examples=40, deadline=None)
@given(mats(4, 3), mats(4, 3))
def test_intersection_dimension(a, b):
    if a.rows != b.rows:
        return
    i = intersect(a, b)
    s = span_sum([a, b], a.rows)
    assert i.cols + s.cols == rank(a) + rank(b)


def test_solve():
    m = Mat.from_rows([[1, 2], [3, 4]])
    assert solve(m, [5, 6]) == [Fraction(-4), Fraction(9, 2)]
    assert solve(Mat.from_rows([[1, 1], [1, 1]]), [1, 2]) is None


def test_json_round_trip_and_shape_errors():
    m = Mat.from_rows([[Fraction(1, 3), 0], [-2, 5]])
    assert mat_to_json(m) == [["1/3", "0"], ["-2", "5"]]
    assert mat_from_json(mat_to_json(m), 2, 2) == m
    with pytest.raises(DimensionError):
        mat_from_json([["1"]], 1, 2)
    with pytest.raises(DimensionError):
        mat_from_json([["1"]], 0, 1)
    assert mat_from_json([], 0, 3).shape == (0, 3)


def test_scalars():
    assert frac("2/4") == Fraction(1, 2)
    assert fmt_rational(Fraction(-3, 6)) == "-1/2"
    with pytest.raises(DimensionError):
        Mat.from_rows([[1]]) @ Mat.from_rows([[1, 2], [3, 4]])
    with pytest.raises(DimensionError):
        hstack([Mat(2, 1), Mat(3, 1)])


def test_oracle_agrees_on_fixed_example():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert rank(Mat.from_rows(rows)) == sympy.Matrix(rows).rank() == 2
