"""Determinantal identities for bilinear secants of the distinguished curve.

The curve of bidegree (n, n+1) in P^n x P^(n+1) is cut out by the 2x2 minors
of the 2 x (2n+1) double-Hankel matrix pairing the coordinate sequences
x_0..x_n and y_0..y_(n+1); its k-th bilinear secant is cut out by the maximal
minors of the (k+1)-row analogue.  This module builds those matrices, checks
by exact polynomial expansion that every 2x2 minor of the big matrix is a
telescoping sum of adjacent 2x2 minors of the small one, and computes the
vanishing order of the determinant (in the square case 3k = 2n+2) along the
parametrisation x_i = s^(n-i) t^i, y_j = s^(n+1-j) t^j of the curve.

Polynomials are sparse dictionaries from exponent tuples to exact integer or
rational coefficients; the ambient ring has the 2n+3 variables x_0..x_n,
y_0..y_(n+1) and the parametrisation lands in a 2-variable ring (s, t).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations


class SecantError(ValueError):
    pass


class SparsePoly:
    """Sparse multivariate polynomial with exact coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for exp, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    exp = tuple(exp)
                    new = self.terms.get(exp, 0) + c
                    if new:
                        self.terms[exp] = new
                    else:
                        self.terms.pop(exp, None)

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        exp = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, {exp: 1})

    @classmethod
    def monomial(cls, nvars, exp, c=1):
        return cls(nvars, {tuple(exp): c})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, SparsePoly) and self.nvars == other.nvars \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        out = dict(self.terms)
        for exp, c in other.terms.items():
            new = out.get(exp, 0) + c
            if new:
                out[exp] = new
            else:
                out.pop(exp, None)
        return SparsePoly(self.nvars, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for exp, c in other.terms.items():
            new = out.get(exp, 0) - c
            if new:
                out[exp] = new
            else:
                out.pop(exp, None)
        return SparsePoly(self.nvars, out)

    def __neg__(self):
        return SparsePoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            if not other:
                return SparsePoly(self.nvars)
            return SparsePoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                new = out.get(exp, 0) + c1 * c2
                if new:
                    out[exp] = new
                else:
                    out.pop(exp, None)
        return SparsePoly(self.nvars, out)

    __rmul__ = __mul__

    def diff(self, var):
        out = {}
        for exp, c in self.terms.items():
            k = exp[var]
            if k:
                new = list(exp)
                new[var] = k - 1
                out[tuple(new)] = c * k
        return SparsePoly(self.nvars, out)

    def substitute_monomials(self, images, target_nvars):
        """Substitute variable i by the monomial with exponent images[i]."""
        out = {}
        for exp, c in self.terms.items():
            tgt = [0] * target_nvars
            for v, k in enumerate(exp):
                if k:
                    img = images[v]
                    for j in range(target_nvars):
                        tgt[j] += k * img[j]
            tgt = tuple(tgt)
            new = out.get(tgt, 0) + c
            if new:
                out[tgt] = new
            else:
                out.pop(tgt, None)
        return SparsePoly(target_nvars, out)

    def evaluate(self, point):
        total = 0
        for exp, c in self.terms.items():
            v = c
            for x, k in zip(point, exp):
                if k:
                    v = v * x ** k
            total = total + v
        return total

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for exp, c in self.sorted_terms():
            mono = "*".join(f"v{i}^{k}" if k > 1 else f"v{i}"
                            for i, k in enumerate(exp) if k)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


# Catalecticant matrices -------------------------------------------------------

@dataclass(frozen=True)
class CatalecticantMatrix:
    """(k+1) x (2n-2k+3) double-Hankel matrix in x_0..x_n, y_0..y_(n+1).

    Entry (r, c) is the variable x_(c+r) in the x block (columns 0..n-k) and
    y_(c'+r) in the y block (columns n-k+1..2n-2k+2, c' the offset in the
    block).  Variables are numbered 0..n for the x_i and n+1..2n+2 for the
    y_j.  The matrix is square exactly when 3k = 2n+2.
    """

    n: int
    k: int
    entries: tuple[tuple[int, ...], ...]

    @property
    def nrows(self):
        return self.k + 1

    @property
    def ncols(self):
        return 2 * self.n - 2 * self.k + 3

    @property
    def is_square(self):
        return 3 * self.k == 2 * self.n + 2

    @property
    def x_cols(self):
        return self.n - self.k + 1

    def var_name(self, v):
        return f"x{v}" if v <= self.n else f"y{v - self.n - 1}"


def build_matrix(n: int, k: int) -> CatalecticantMatrix:
    """The matrix whose maximal minors cut out the k-th bilinear secant."""
    if not 1 <= k <= n:
        raise SecantError(f"need 1 <= k <= n; got k={k}, n={n}")
    xcols = n - k + 1
    ycols = n - k + 2
    rows = []
    for r in range(k + 1):
        row = [c + r for c in range(xcols)]
        row += [(n + 1) + c + r for c in range(ycols)]
        rows.append(tuple(row))
    return CatalecticantMatrix(n, k, tuple(rows))


def expected_dimension(n: int, k: int) -> int:
    """Dimension of the k-th bilinear secant of the distinguished curve."""
    if k < 1:
        raise SecantError("secant index k must be >= 1")
    return min(3 * k - 2, 2 * n + 1)


def _var_kind(n, v):
    # (series, index): series 0 for x, 1 for y
    return (0, v) if v <= n else (1, v - n - 1)


def _series_var(n, series, idx):
    return idx if series == 0 else n + 1 + idx


def _adjacent_minor_ok(n, series_p, t, series_q, u):
    """Is P_t Q_u - P_(t+1) Q_(u-1) a 2x2 minor (up to sign) of the 2-row matrix?"""
    max_p = n - 1 if series_p == 0 else n
    max_q = n - 1 if series_q == 0 else n
    return 0 <= t <= max_p and 0 <= u - 1 <= max_q


def telescoped_minor(mat: CatalecticantMatrix, r1, r2, c1, c2) -> SparsePoly | None:
    """Telescoping expansion of the (r1,r2|c1,c2) minor into adjacent minors.

    Built from the Hankel index pattern, not from the matrix entries; returns
    None when a summand would fall outside the 2-row matrix.
    """
    n = mat.n
    nv = 2 * n + 3
    sp, i = _var_kind(n, mat.entries[r1][c1])
    sq, j0 = _var_kind(n, mat.entries[r2][c2])
    p = i + (r2 - r1)
    total = SparsePoly.zero(nv)
    j = j0
    for t in range(i, p):
        u = i + j - t
        if not _adjacent_minor_ok(n, sp, t, sq, u):
            return None
        a = SparsePoly.variable(nv, _series_var(n, sp, t))
        b = SparsePoly.variable(nv, _series_var(n, sq, u))
        c = SparsePoly.variable(nv, _series_var(n, sp, t + 1))
        d = SparsePoly.variable(nv, _series_var(n, sq, u - 1))
        total = total + (a * b - c * d)
    return total


def minor_poly(mat: CatalecticantMatrix, r1, r2, c1, c2) -> SparsePoly:
    nv = 2 * mat.n + 3
    a = SparsePoly.variable(nv, mat.entries[r1][c1])
    b = SparsePoly.variable(nv, mat.entries[r2][c2])
    c = SparsePoly.variable(nv, mat.entries[r1][c2])
    d = SparsePoly.variable(nv, mat.entries[r2][c1])
    return a * b - c * d


def matrix_telescopes(mat: CatalecticantMatrix) -> bool:
    """Whether every 2x2 minor of `mat` equals its telescoping expansion
    into adjacent 2x2 minors of the 2-row matrix, as exact polynomials."""
    for r1, r2 in combinations(range(mat.nrows), 2):
        for c1, c2 in combinations(range(mat.ncols), 2):
            rhs = telescoped_minor(mat, r1, r2, c1, c2)
            if rhs is None or minor_poly(mat, r1, r2, c1, c2) != rhs:
                return False
    return True


def minor_telescoping_check(n: int, k: int) -> bool:
    """Every 2x2 minor of the k-th matrix lies in the ideal of 2x2 minors of
    the first, certified by the explicit telescoping identity."""
    return matrix_telescopes(build_matrix(n, k))


# The curve parametrisation -----------------------------------------------------

def parametrize_curve(n: int) -> list[tuple[int, int]]:
    """Monomial images (s-exponent, t-exponent) of x_0..x_n, y_0..y_(n+1)."""
    if n < 1:
        raise SecantError("need n >= 1")
    images = [(n - i, i) for i in range(n + 1)]
    images += [(n + 1 - j, j) for j in range(n + 2)]
    return images


def restrict_to_curve(poly: SparsePoly, n: int) -> SparsePoly:
    return poly.substitute_monomials(parametrize_curve(n), 2)


def minors_vanish_on_curve(n: int) -> bool:
    """All 2x2 minors of the 2-row matrix vanish under the parametrisation."""
    mat = build_matrix(n, 1)
    for c1, c2 in combinations(range(mat.ncols), 2):
        if not restrict_to_curve(minor_poly(mat, 0, 1, c1, c2), n).is_zero():
            return False
    return True


def determinant(mat: CatalecticantMatrix) -> SparsePoly:
    """Determinant of a square catalecticant matrix (column-subset recursion)."""
    if mat.nrows != mat.ncols:
        raise SecantError("determinant of a non-square matrix")
    size = mat.nrows
    nv = 2 * mat.n + 3
    memo = {}

    def rec(row, colmask):
        if row == size:
            return SparsePoly.constant(nv, 1)
        key = colmask
        if key in memo:
            return memo[key]
        total = SparsePoly.zero(nv)
        sign = 1
        for c in range(size):
            if colmask & (1 << c):
                sub = rec(row + 1, colmask & ~(1 << c))
                term = SparsePoly.variable(nv, mat.entries[row][c]) * sub
                total = total + (term if sign > 0 else -term)
                sign = -sign
        memo[key] = total
        return total

    return rec(0, (1 << size) - 1)


_VANISHING_N_GUARD = 8


def vanishing_order_along_C(n: int, guard: int = _VANISHING_N_GUARD) -> int:
    """Vanishing order of det(M_k) along the parametrised curve, 3k = 2n+2.

    Returns the largest d such that every partial derivative of order d-1
    (in the 2n+3 ambient variables) vanishes identically under the curve
    parametrisation, while some order-d partial does not.
    """
    if n % 3 != 2:
        raise SecantError("the determinant is defined only for n = 2 mod 3")
    if n > guard:
        raise SecantError(
            f"n={n} beyond the size guard ({guard}); pass a larger guard to force")
    k = (2 * n + 2) // 3
    mat = build_matrix(n, k)
    detp = determinant(mat)
    images = parametrize_curve(n)
    nv = 2 * n + 3
    level = {(): detp}
    order = 0
    while True:
        for alpha in sorted(level):
            if not level[alpha].substitute_monomials(images, 2).is_zero():
                return order
        nxt = {}
        for alpha, poly in level.items():
            start = alpha[-1] if alpha else 0
            for v in range(start, nv):
                q = poly.diff(v)
                if not q.is_zero():
                    nxt[alpha + (v,)] = q
        if not nxt:
            raise SecantError("determinant vanished to all orders; not expected")
        level = nxt
        order += 1


def secant_report(n: int, check_vanishing: bool = True, guard: int = _VANISHING_N_GUARD) -> dict:
    """Summary of the determinantal checks for the given n (square case when
    n = 2 mod 3): {n, k, square, telescoping_ok, vanishing_order}."""
    square = n % 3 == 2
    k = (2 * n + 2) // 3 if square else None
    report = {
        "n": n,
        "k": k,
        "square": square,
        "minors_vanish_on_curve": minors_vanish_on_curve(n),
        "telescoping_ok": minor_telescoping_check(n, k) if square else None,
        "vanishing_order": None,
    }
    if square and check_vanishing:
        report["vanishing_order"] = vanishing_order_along_C(n, guard=guard)
    return report
