"""Effectivity inequalities and base-locus multiplicity bounds.

Every bound is a linear functional f on divisor classes, written in the basis
(d1, d2, m_1, ..., m_s).  Effectivity bounds assert f(D) >= 0 for every
effective D.  Base-locus bounds come with a fixed subvariety V and assert
that |D| contains V at least kappa(D) = max(0, f(D)) times; the unclamped
functional is kept because the cone computations consume f(D) <= 0 as a
movable-candidate inequality.

The families implemented here are the ones available on the blow-up of
P^n x P^(n+1) at s points in general position: exceptional divisors, bilinear
spans of marked points, pulled-back hyperplanes and secant cones from the
first factor, and the bilinear secant varieties and joins of the distinguished
rational curve of bidegree (n, n+1) through n+3 points (which exists only for
s = n+3, hence the gates below).
"""
from __future__ import annotations

from dataclasses import dataclass

from .lattice import BlowupSpace, DivisorClass, LatticeError


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class LinearFunctional:
    """Integer functional on divisor classes in the basis (d1, d2, m_1..m_s)."""

    coeffs: tuple[int, ...]
    label: str
    sense: str = "kappa"  # "kappa": f(D) is a base-locus bound; "effectivity": f(D) >= 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if self.sense not in ("kappa", "effectivity"):
            raise FormulaError(f"unknown sense {self.sense!r}")

    @property
    def s(self) -> int:
        return len(self.coeffs) - 2

    def __call__(self, D: DivisorClass) -> int:
        return evaluate(self, D)

    def to_json_dict(self) -> dict:
        return {"label": self.label, "coeffs": list(self.coeffs), "sense": self.sense}


@dataclass(frozen=True)
class FixedTarget:
    """The subvariety a base-locus bound talks about."""

    family: str
    params: tuple[tuple[str, object], ...] = ()
    divisor_class: DivisorClass | None = None  # set when the target is a divisor


@dataclass(frozen=True)
class KappaFormula:
    """Base-locus multiplicity lower bound kappa(D) = max(0, functional(D))."""

    functional: LinearFunctional
    target: FixedTarget
    exact: bool = False  # True when the bound is the exact multiplicity

    @property
    def label(self) -> str:
        return self.functional.label


def evaluate(formula, D: DivisorClass) -> int:
    f = formula.functional if isinstance(formula, KappaFormula) else formula
    if f.s != D.s:
        raise LatticeError("functional and divisor class have different point counts")
    return f.coeffs[0] * D.d1 + f.coeffs[1] * D.d2 + sum(
        c * m for c, m in zip(f.coeffs[2:], D.mults))


def kappa(formula, D: DivisorClass) -> int:
    return max(0, evaluate(formula, D))


def inequality_row(formula) -> tuple[int, ...]:
    """Row over the table coordinates (d1, d2, e_1..e_s), e_i = -m_i.

    Effectivity functionals give the row f itself (f(D) >= 0); kappa
    functionals give -f (a movable candidate has empty kappa, f(D) <= 0).
    """
    f = formula.functional if isinstance(formula, KappaFormula) else formula
    row = (f.coeffs[0], f.coeffs[1], *(-c for c in f.coeffs[2:]))
    if f.sense == "kappa":
        row = tuple(-x for x in row)
    return row


def _coeff_vec(s, d1, d2, mult_map):
    return (d1, d2, *(mult_map.get(i, 0) for i in range(1, s + 1)))


def _iset(I):
    out = tuple(sorted(set(I)))
    return out


def _fmt(I):
    return "{" + ",".join(str(i) for i in I) + "}"


def _check_points(space, I):
    for i in I:
        if not 1 <= i <= space.s:
            raise FormulaError(f"point index {i} out of range 1..{space.s}")


# Effectivity families ---------------------------------------------------------

def effectivity(space: BlowupSpace) -> list[LinearFunctional]:
    """All effectivity inequalities valid on the m = n+1 spaces with s <= n+3.

    d_j >= 0; m_i <= d1 + d2 (curves of bidegree (1,1) through a point);
    sum_I m_i <= n*d1 + (n+1)*d2 for |I| <= n+2 (moving curves of bidegree
    (n, n+1) through the points of I).
    """
    n, s = space.n, space.s
    if space.m != n + 1 or s > n + 3:
        raise FormulaError(f"effectivity families implemented for m=n+1, s<=n+3; got {space}")
    out = [LinearFunctional(_coeff_vec(s, 1, 0, {}), "effectivity:d1", "effectivity"),
           LinearFunctional(_coeff_vec(s, 0, 1, {}), "effectivity:d2", "effectivity")]
    for i in range(1, s + 1):
        out.append(LinearFunctional(
            _coeff_vec(s, 1, 1, {i: -1}),
            f"effectivity:point(n={n},s={s},i={i})", "effectivity"))
    from itertools import combinations
    for size in range(1, min(n + 2, s) + 1):
        for I in combinations(range(1, s + 1), size):
            out.append(LinearFunctional(
                _coeff_vec(s, n, n + 1, {i: -1 for i in I}),
                f"effectivity:curve(n={n},s={s},I={_fmt(I)})", "effectivity"))
    return out


def effectivity_x346(space: BlowupSpace) -> list[LinearFunctional]:
    """The three extra effectivity families special to X^(3,4)_6."""
    if (space.n, space.m, space.s) != (3, 4, 6):
        raise FormulaError(f"these inequalities are specific to X^(3,4)_6; got {space}")
    from itertools import combinations
    s = 6
    out = [LinearFunctional(_coeff_vec(s, 5, 4, {i: -1 for i in range(1, 7)}),
                            "effectivity-x346:a", "effectivity")]
    for I in combinations(range(1, 7), 3):
        coeffs = {i: (-2 if i in I else -1) for i in range(1, 7)}
        out.append(LinearFunctional(_coeff_vec(s, 6, 7, coeffs),
                                    f"effectivity-x346:b(I={_fmt(I)})", "effectivity"))
    out.append(LinearFunctional(_coeff_vec(s, 11, 14, {i: -3 for i in range(1, 7)}),
                                "effectivity-x346:c", "effectivity"))
    return out


# Base-locus bound families ----------------------------------------------------

def kappa_exceptional(space: BlowupSpace, i: int) -> KappaFormula:
    """|D| contains the exceptional divisor E_i at least max(0, -m_i) times."""
    _check_points(space, [i])
    from .lattice import exceptional
    f = LinearFunctional(_coeff_vec(space.s, 0, 0, {i: -1}),
                         f"bli:exceptional(s={space.s},i={i})")
    target = FixedTarget("exceptional", (("i", i),), exceptional(space, i))
    return KappaFormula(f, target, exact=True)


def kappa_bilinear_span(space: BlowupSpace, I) -> KappaFormula:
    """Bound for the bilinear span of the points of I (|I| >= 2).

    functional(D) = sum_I m_i - (|I|-1)(d1+d2).  For |I| = n+1 and
    n+1 <= s <= n+2 the span is the divisor H2 - sum_I E_i and the bound is
    the exact multiplicity of containment.
    """
    I = _iset(I)
    _check_points(space, I)
    if len(I) < 2:
        raise FormulaError("bilinear spans of fewer than 2 points have no bound")
    k = len(I)
    f = LinearFunctional(
        _coeff_vec(space.s, -(k - 1), -(k - 1), {i: 1 for i in I}),
        f"bli:span(n={space.n},s={space.s},I={_fmt(I)})")
    cls = None
    exact = False
    if len(I) == space.n + 1:
        cls = DivisorClass(0, 1, tuple(1 if i in I else 0 for i in range(1, space.s + 1)))
        exact = space.n + 1 <= space.s <= space.n + 2
    return KappaFormula(f, FixedTarget("bilinear_span", (("I", I),), cls), exact=exact)


def kappa_pullback_hyperplane(space: BlowupSpace, I) -> KappaFormula:
    """Bound for the fixed hyperplane H1 - sum_I E_i pulled back from the
    first factor, |I| = n; exact for n <= s <= n+2."""
    I = _iset(I)
    _check_points(space, I)
    n = space.n
    if len(I) != n:
        raise FormulaError(f"pulled-back hyperplanes need |I| = n = {n}")
    if space.s < n:
        raise FormulaError("needs at least n points")
    f = LinearFunctional(
        _coeff_vec(space.s, -(n - 1), -n, {i: 1 for i in I}),
        f"bli:hyperplane(n={n},s={space.s},I={_fmt(I)})")
    cls = DivisorClass(1, 0, tuple(1 if i in I else 0 for i in range(1, space.s + 1)))
    return KappaFormula(f, FixedTarget("pullback_hyperplane", (("I", I),), cls),
                        exact=n <= space.s <= n + 2)


def kappa_pullback_cone(space: BlowupSpace, t: int, I) -> KappaFormula:
    """Bound for the pulled-back cone over the t-secant variety of the rational
    normal curve of the first factor, with vertex spanned by the points of I.

    Needs s = n+3, t >= 0 and |I| = n - 2t >= 0.  The divisor class is
    (t+1)H1 - (t+1) sum_I E_i - t sum_{not I} E_i.
    """
    I = _iset(I)
    _check_points(space, I)
    n, s = space.n, space.s
    if s != n + 3:
        raise FormulaError("pulled-back secant cones live on the s = n+3 spaces")
    if t < 0 or len(I) != n - 2 * t:
        raise FormulaError(f"need t >= 0 and |I| = n - 2t; got t={t}, |I|={len(I)}")
    if t == 0:
        base = kappa_pullback_hyperplane(space, I)
        return KappaFormula(base.functional, FixedTarget(
            "pullback_cone", (("t", 0), ("I", I)), base.target.divisor_class))
    l = len(I)
    mult = {i: t + 1 if i in I else t for i in range(1, s + 1)}
    f = LinearFunctional(
        _coeff_vec(s, -((n + 1) * t + l - 1), -((n + 3) * t + l), mult),
        f"bli:cone(n={n},s={s},t={t},I={_fmt(I)})")
    cls = DivisorClass(t + 1, 0, tuple(mult[i] for i in range(1, s + 1)))
    return KappaFormula(f, FixedTarget("pullback_cone", (("t", t), ("I", I)), cls))


def kappa_bisecant(space: BlowupSpace, k: int) -> KappaFormula:
    """Bound for the k-th bilinear secant of the distinguished rational curve
    of bidegree (n, n+1) through the n+3 points; needs s = n+3, k >= 1."""
    n, s = space.n, space.s
    if s != n + 3:
        raise FormulaError("bilinear secants of the distinguished curve need s = n+3")
    if k < 1:
        raise FormulaError("secant index k must be >= 1")
    f = LinearFunctional(
        _coeff_vec(s, -(n * k + k - 1), -(n * k + 2 * k - 1), {i: k for i in range(1, s + 1)}),
        f"bli:bisecant(n={n},s={s},k={k})")
    cls = None
    if 3 * k == 2 * n + 2:
        # square case: the secant is the divisor of class
        # ((n+1)/3) H1 + ((n+4)/3) H2 - k sum(E_i), with multiplicity k along C
        cls = DivisorClass((n + 1) // 3, (n + 4) // 3, (k,) * s)
    return KappaFormula(f, FixedTarget("bisecant", (("k", k),), cls))


def kappa_bilinear_join(space: BlowupSpace, k: int, I) -> KappaFormula:
    """Bound for the bilinear join of the k-th bilinear secant of the
    distinguished curve with the bilinear span of the points of I.

    Needs s = n+3, k >= 1 and |I| >= 1.
    """
    I = _iset(I)
    _check_points(space, I)
    n, s = space.n, space.s
    if s != n + 3:
        raise FormulaError("bilinear joins of the distinguished curve need s = n+3")
    if k < 1 or len(I) < 1:
        raise FormulaError("need k >= 1 and |I| >= 1")
    l = len(I)
    mult = {i: k + 1 if i in I else k for i in range(1, s + 1)}
    f = LinearFunctional(
        _coeff_vec(s, -(n * k + k + l - 1), -(n * k + 2 * k + l - 1), mult),
        f"bli:join(n={n},s={s},k={k},I={_fmt(I)})")
    return KappaFormula(f, FixedTarget("bilinear_join", (("k", k), ("I", I)), None))


def kappa_covering_curve(space: BlowupSpace, fixed: DivisorClass, curve_a1: int,
                         curve_a2: int, excs, label_tag: str) -> KappaFormula:
    """Bound from a family of curves covering a fixed divisor F.

    If irreducible curves of class g = a1*l1 + a2*l2 - sum(b_i e_i) sweep out
    F and F.g = -1, then |D| contains F at least max(0, -D.g) times.  The
    intersection F.g = -1 is checked here; the covering property is an input.
    """
    from .lattice import CurveClass, pair
    g = CurveClass(curve_a1, curve_a2, tuple(excs))
    if pair(space, fixed, g) != -1:
        raise FormulaError("covering-curve bound requires F.g = -1")
    f = LinearFunctional(
        (-curve_a1, -curve_a2, *g.excs),
        f"bli:sweep({label_tag};g={curve_a1}l1+{curve_a2}l2-...)")
    return KappaFormula(f, FixedTarget("covering_curve", (("tag", label_tag),), fixed))
