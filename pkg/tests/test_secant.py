import dataclasses
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from bicones.secant import (CatalecticantMatrix, SecantError, SparsePoly,
                            build_matrix, determinant, expected_dimension,
                            matrix_telescopes, minor_poly,
                            minor_telescoping_check, minors_vanish_on_curve,
                            parametrize_curve, restrict_to_curve, secant_report,
                            vanishing_order_along_C)


def names(mat):
    return [[mat.var_name(v) for v in row] for row in mat.entries]


def test_build_matrix_displays():
    m2 = build_matrix(2, 2)
    assert names(m2) == [["x0", "y0", "y1"], ["x1", "y1", "y2"], ["x2", "y2", "y3"]]
    m1 = build_matrix(2, 1)
    assert names(m1) == [["x0", "x1", "y0", "y1", "y2"],
                         ["x1", "x2", "y1", "y2", "y3"]]
    m54 = build_matrix(5, 4)
    assert (m54.nrows, m54.ncols) == (5, 5)
    assert m54.is_square
    assert not build_matrix(5, 3).is_square
    with pytest.raises(SecantError):
        build_matrix(3, 4)
    with pytest.raises(SecantError):
        build_matrix(3, 0)


def test_expected_dimension():
    assert expected_dimension(2, 2) == 4   # a divisor in the 5-fold
    assert expected_dimension(3, 2) == 4   # codimension 3 in dimension 7
    assert expected_dimension(7, 1) == 1   # the curve itself
    with pytest.raises(SecantError):
        expected_dimension(2, 0)


def test_telescoping_small_and_large():
    assert minor_telescoping_check(2, 2)
    assert minor_telescoping_check(5, 4)
    assert minor_telescoping_check(3, 2)
    assert minor_telescoping_check(4, 3)


def test_telescoping_corrupted_matrix():
    m2 = build_matrix(2, 2)
    rows = [list(r) for r in m2.entries]
    rows[0][0], rows[2][2] = rows[2][2], rows[0][0]
    bad = dataclasses.replace(m2, entries=tuple(tuple(r) for r in rows))
    assert not matrix_telescopes(bad)


def test_parametrization_kills_minors():
    images = parametrize_curve(2)
    # x0 = s^2, x1 = st, x2 = t^2, y0 = s^3, ..., y3 = t^3
    assert images[0] == (2, 0) and images[1] == (1, 1) and images[2] == (0, 2)
    assert images[3] == (3, 0) and images[6] == (0, 3)
    for n in range(1, 9):
        assert minors_vanish_on_curve(n)


def test_determinant_vanishes_on_curve():
    for n in (2, 5):
        k = (2 * n + 2) // 3
        det = determinant(build_matrix(n, k))
        assert not det.is_zero()
        assert restrict_to_curve(det, n).is_zero()


def test_vanishing_orders():
    assert vanishing_order_along_C(2) == 2
    assert vanishing_order_along_C(5) == 4
    with pytest.raises(SecantError):
        vanishing_order_along_C(3)
    with pytest.raises(SecantError):
        vanishing_order_along_C(11)  # beyond the default size guard


def test_vanishing_order_n8_runtime_tier():
    assert vanishing_order_along_C(8) == 6


def test_report_shape():
    rep = secant_report(2)
    assert rep == {"n": 2, "k": 2, "square": True, "minors_vanish_on_curve": True,
                   "telescoping_ok": True, "vanishing_order": 2}
    rep3 = secant_report(3)
    assert rep3["square"] is False and rep3["vanishing_order"] is None


def test_first_partials_are_minor_combinations_indirectly():
    # order-(k-1) partials vanish along the curve because all 2x2 minors do
    n, k = 2, 2
    det = determinant(build_matrix(n, k))
    for v in range(2 * n + 3):
        assert restrict_to_curve(det.diff(v), n).is_zero()


# SparsePoly ring laws -------------------------------------------------------------

exps = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.lists(st.tuples(exps, st.integers(-5, 5)), max_size=5).map(
    lambda ts: SparsePoly(3, ts))
points = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))


@given(polys, polys, polys, points)
@settings(max_examples=80, deadline=None)
def test_ring_laws_by_evaluation(p, q, r, point):
    lhs = (p * q) * r
    rhs = p * (q * r)
    assert lhs == rhs
    assert (p * (q + r)) == (p * q + p * r)
    assert (p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point)
    assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)


def test_sparse_poly_rational_coeffs():
    p = SparsePoly(2, {(1, 0): Fraction(1, 2), (0, 1): Fraction(1, 3)})
    q = 6 * p
    assert q.terms == {(1, 0): 3, (0, 1): 2}
    assert p.evaluate((2, 3)) == 2


def test_sparse_poly_diff():
    p = SparsePoly(2, {(2, 1): 3})
    assert p.diff(0).terms == {(1, 1): 6}
    assert p.diff(1).terms == {(2, 0): 3}
    assert p.diff(0).diff(0).diff(0).is_zero()
