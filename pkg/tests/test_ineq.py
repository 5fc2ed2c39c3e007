import pytest
from hypothesis import given, settings, strategies as st

from bicones import ineq
from bicones.ineq import (FormulaError, evaluate, inequality_row, kappa)
from bicones.lattice import BlowupSpace, DivisorClass

X235 = BlowupSpace(2, 3, 5)
X234 = BlowupSpace(2, 3, 4)
X346 = BlowupSpace(3, 4, 6)


def coeffs_of(f):
    return (f.functional if isinstance(f, ineq.KappaFormula) else f).coeffs


def test_effectivity_families():
    fams = ineq.effectivity(X235)
    labels = {f.label for f in fams}
    assert "effectivity:d1" in labels and "effectivity:d2" in labels
    # part (a): d1 + d2 >= m_1
    point = next(f for f in fams if f.label.endswith("i=1)"))
    assert point.coeffs == (1, 1, -1, 0, 0, 0, 0)
    # the largest curve inequality uses |I| = n+2 = 4, never all five points
    curve_sizes = {sum(1 for c in f.coeffs[2:] if c == -1)
                   for f in fams if "curve" in f.label}
    assert max(curve_sizes) == 4
    zero = DivisorClass(0, 0, (0,) * 5)
    assert all(evaluate(f, zero) == 0 for f in fams)


def test_effectivity_gate():
    with pytest.raises(FormulaError):
        ineq.effectivity(BlowupSpace(2, 2, 4))
    with pytest.raises(FormulaError):
        ineq.effectivity(BlowupSpace(2, 3, 6))  # s > n+3


def test_kappa_exceptional():
    f = ineq.kappa_exceptional(X235, 1)
    assert kappa(f, DivisorClass(1, 1, (-2, 0, 0, 0, 0))) == 2
    assert kappa(f, DivisorClass(1, 1, (3, 0, 0, 0, 0))) == 0
    e1 = DivisorClass(0, 0, (-1, 0, 0, 0, 0))  # the class E1 itself (m_1 = -1)
    assert kappa(f, e1) == 1
    with pytest.raises(FormulaError):
        ineq.kappa_exceptional(X235, 6)


def test_kappa_bilinear_span():
    f = ineq.kappa_bilinear_span(X235, (1, 2, 3))
    assert coeffs_of(f) == (-2, -2, 1, 1, 1, 0, 0)
    D = DivisorClass(0, 1, (1, 1, 1, 0, 0))
    assert kappa(f, D) == 1  # the span divisor contains itself once
    assert f.target.divisor_class == D
    assert not f.exact  # exact only for n+1 <= s <= n+2; here s = n+3
    f4 = ineq.kappa_bilinear_span(X234, (1, 2, 3))
    assert f4.exact
    f6 = ineq.kappa_bilinear_span(X346, (1, 2, 3, 4))
    assert coeffs_of(f6) == (-3, -3, 1, 1, 1, 1, 0, 0)
    with pytest.raises(FormulaError):
        ineq.kappa_bilinear_span(X235, (1,))


def test_kappa_pullback_hyperplane():
    f = ineq.kappa_pullback_hyperplane(X235, (1, 2))
    assert coeffs_of(f) == (-1, -2, 1, 1, 0, 0, 0)
    f3 = ineq.kappa_pullback_hyperplane(X346, (1, 2, 3))
    assert coeffs_of(f3) == (-2, -3, 1, 1, 1, 0, 0, 0)
    f4 = ineq.kappa_pullback_hyperplane(X234, (1, 2))
    D = DivisorClass(1, 0, (1, 1, 0, 0))
    assert kappa(f4, D) == 1
    assert f4.exact
    with pytest.raises(FormulaError):
        ineq.kappa_pullback_hyperplane(X235, (1, 2, 3))


def test_kappa_pullback_cone():
    f = ineq.kappa_pullback_cone(X235, 1, ())
    assert coeffs_of(f) == (-2, -5, 1, 1, 1, 1, 1)
    assert f.target.divisor_class == DivisorClass(2, 0, (1,) * 5)
    # the generic secant-cone bound; the join interpretation of the same
    # divisor gives the stronger -6*d2 bound used in the 6-point bundle
    f346 = ineq.kappa_pullback_cone(X346, 1, (2,))
    assert coeffs_of(f346) == (-4, -7, 1, 2, 1, 1, 1, 1)
    # t = 0 reduces to the pulled-back hyperplane, coefficientwise
    f0 = ineq.kappa_pullback_cone(X235, 0, (1, 2))
    assert coeffs_of(f0) == coeffs_of(ineq.kappa_pullback_hyperplane(X235, (1, 2)))
    with pytest.raises(FormulaError):
        ineq.kappa_pullback_cone(X235, 1, (1,))  # |I| != n - 2t
    with pytest.raises(FormulaError):
        ineq.kappa_pullback_cone(X234, 1, ())  # s != n+3


def test_kappa_bisecant():
    f = ineq.kappa_bisecant(X235, 2)
    assert coeffs_of(f) == (-5, -7, 2, 2, 2, 2, 2)
    bs2 = DivisorClass(1, 2, (2,) * 5)
    assert kappa(f, bs2) == 20 - 5 - 14 == 1
    assert f.target.divisor_class == bs2
    f1 = ineq.kappa_bisecant(X235, 1)
    assert coeffs_of(f1) == (-2, -3, 1, 1, 1, 1, 1)  # -D.C for the curve class
    with pytest.raises(FormulaError):
        ineq.kappa_bisecant(X235, 0)
    with pytest.raises(FormulaError):
        ineq.kappa_bisecant(X234, 1)


def test_kappa_bilinear_join():
    f = ineq.kappa_bilinear_join(X235, 1, (1, 2))
    assert coeffs_of(f) == (-4, -5, 2, 2, 1, 1, 1)
    f346 = ineq.kappa_bilinear_join(X346, 2, (1,))
    assert coeffs_of(f346) == (-8, -10, 3, 2, 2, 2, 2, 2)
    f3 = ineq.kappa_bilinear_join(X346, 1, (1, 2, 3))
    assert coeffs_of(f3) == (-6, -7, 2, 2, 2, 1, 1, 1)
    with pytest.raises(FormulaError):
        ineq.kappa_bilinear_join(X235, 0, (1,))
    with pytest.raises(FormulaError):
        ineq.kappa_bilinear_join(X235, 1, ())


def test_effectivity_x346():
    fams = ineq.effectivity_x346(X346)
    a = next(f for f in fams if f.label.endswith(":a"))
    c = next(f for f in fams if f.label.endswith(":c"))
    D = DivisorClass(2, 1, (2,) * 6)
    assert evaluate(a, D) == 10 + 4 - 12 == 2
    assert evaluate(c, D) == 22 + 14 - 36 == 0
    zero = DivisorClass(0, 0, (0,) * 6)
    assert all(evaluate(f, zero) == 0 for f in fams)
    with pytest.raises(FormulaError):
        ineq.effectivity_x346(X235)


def test_covering_curve_requires_minus_one():
    Q = DivisorClass(2, 0, (1,) * 5)
    f = ineq.kappa_covering_curve(X235, Q, 2, 4, (1,) * 5, "Q")
    assert coeffs_of(f) == (-2, -4, 1, 1, 1, 1, 1)
    with pytest.raises(FormulaError):
        ineq.kappa_covering_curve(X235, Q, 3, 4, (1,) * 5, "bad")  # Q.g = +1


def test_exactness_drop_by_one():
    # subtracting the fixed class once lowers the unclamped bound by exactly 1
    for f in [ineq.kappa_pullback_hyperplane(X235, (1, 2)),
              ineq.kappa_bilinear_span(X235, (1, 2, 3)),
              ineq.kappa_exceptional(X235, 3)]:
        F = f.target.divisor_class
        assert evaluate(f, F) == 1
        D = DivisorClass(4, 5, (3, 3, 2, 1, 0))
        assert evaluate(f, D - F) == evaluate(f, D) - 1


def test_kappa_never_negative_and_zero_class():
    forms = [ineq.kappa_bisecant(X235, 3), ineq.kappa_bilinear_span(X235, (2, 4))]
    zero = DivisorClass(0, 0, (0,) * 5)
    for f in forms:
        assert evaluate(f, zero) == 0
        assert kappa(f, zero) == 0


@given(st.tuples(st.integers(-9, 9), st.integers(-9, 9),
                 st.tuples(*[st.integers(-9, 9)] * 5)),
       st.permutations(range(5)))
@settings(max_examples=60, deadline=None)
def test_kappa_permutation_equivariance(vals, perm):
    # relabeling points outside the parameter set maps formulas within the family
    D = DivisorClass(vals[0], vals[1], vals[2])
    Dp = DivisorClass(vals[0], vals[1], tuple(vals[2][i] for i in perm))
    I = (1, 2, 3)
    Ip = tuple(sorted(perm.index(i - 1) + 1 for i in I))
    f = ineq.kappa_bilinear_span(X235, I)
    fp = ineq.kappa_bilinear_span(X235, Ip)
    assert evaluate(f, D) == evaluate(fp, Dp)
    # symmetric families are plainly invariant
    g = ineq.kappa_bisecant(X235, 2)
    assert evaluate(g, D) == evaluate(g, Dp)


def test_inequality_row_senses():
    f = ineq.kappa_bilinear_span(X235, (1, 2, 3))
    assert inequality_row(f) == (2, 2, 1, 1, 1, 0, 0)
    eff = ineq.effectivity(X235)[0]
    assert inequality_row(eff) == (1, 0, 0, 0, 0, 0, 0)


def test_json_export():
    f = ineq.kappa_bisecant(X235, 2)
    d = f.functional.to_json_dict()
    assert d == {"label": "bli:bisecant(n=2,s=5,k=2)",
                 "coeffs": [-5, -7, 2, 2, 2, 2, 2], "sense": "kappa"}
