"""Exact integer/rational linear algebra helpers.

Everything here works on tuples of Python ints (arbitrary precision) or
fractions.Fraction; no floating point is used anywhere in the package.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd


def primitive(v):
    """Divide an integer vector by the gcd of its entries (orientation kept)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def is_zero(v):
    return all(x == 0 for x in v)


def clear_denominators(v):
    """Scale a Fraction vector to a primitive integer vector."""
    lcm = 1
    for x in v:
        d = Fraction(x).denominator
        lcm = lcm * d // gcd(lcm, d)
    return primitive(tuple(int(Fraction(x) * lcm) for x in v))


class _EchelonSieve:
    """Incremental integer echelon form, used for rank and independence tests."""

    def __init__(self):
        self.pivots = {}  # pivot column -> reduced integer row

    def reduce(self, row):
        row = list(row)
        for col in sorted(self.pivots):
            if row[col] == 0:
                continue
            piv = self.pivots[col]
            a, b = piv[col], row[col]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            for j in range(len(row)):
                row[j] = row[j] * ma - piv[j] * mb
        return row

    def insert(self, row):
        """Insert a row; return True if it was independent of the current span."""
        red = self.reduce(row)
        for col, x in enumerate(red):
            if x != 0:
                self.pivots[col] = primitive(red)
                return True
        return False

    @property
    def rank(self):
        return len(self.pivots)


def rank(rows):
    sieve = _EchelonSieve()
    for r in rows:
        sieve.insert(r)
    return sieve.rank


def independent_subset(rows):
    """Indices of a greedy maximal independent subset, in input order."""
    sieve = _EchelonSieve()
    out = []
    for i, r in enumerate(rows):
        if sieve.insert(r):
            out.append(i)
    return out


def det(rows):
    """Determinant of a square integer matrix (Bareiss, exact)."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_fraction(rows, rhs):
    """Solve A x = rhs exactly; A square nonsingular. Returns Fractions."""
    n = len(rows)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(rows, rhs)]
    for k in range(n):
        piv = next(i for i in range(k, n) if m[i][k] != 0)
        m[k], m[piv] = m[piv], m[k]
        inv = m[k][k]
        m[k] = [x / inv for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return tuple(m[i][n] for i in range(n))


def adjugate(rows):
    """Adjugate of a square integer matrix: A * adj(A) = det(A) * I."""
    n = len(rows)
    d = det(rows)
    if d == 0:
        raise ValueError("adjugate of a singular matrix")
    cols = []
    for j in range(n):
        e = [d if i == j else 0 for i in range(n)]
        col = solve_fraction(rows, e)
        assert all(x.denominator == 1 for x in col)
        cols.append([int(x) for x in col])
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def hnf_with_transform(rows, ncols):
    """Row Hermite normal form H = U A with U unimodular.

    Returns (H, U) as lists of row tuples; H has pivot rows first (pivot
    entries positive, entries above a pivot reduced into [0, pivot)), then
    zero rows.
    """
    a = [list(r) for r in rows]
    nr = len(a)
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    row = 0
    for col in range(ncols):
        piv = None
        for i in range(row, nr):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        u[row], u[piv] = u[piv], u[row]
        for i in range(row + 1, nr):
            while a[i][col] != 0:
                q = a[row][col] // a[i][col]
                a[row] = [x - q * y for x, y in zip(a[row], a[i])]
                u[row] = [x - q * y for x, y in zip(u[row], u[i])]
                a[row], a[i] = a[i], a[row]
                u[row], u[i] = u[i], u[row]
        if a[row][col] < 0:
            a[row] = [-x for x in a[row]]
            u[row] = [-x for x in u[row]]
        for i in range(row):
            q = a[i][col] // a[row][col]
            if q != 0:
                a[i] = [x - q * y for x, y in zip(a[i], a[row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[row])]
        row += 1
    return [tuple(r) for r in a], [tuple(r) for r in u]


def integer_kernel(rows, ncols):
    """Basis of the lattice {x in Z^ncols : A x = 0} for integer rows A.

    The returned rows are a basis of the full kernel lattice (which is
    automatically saturated in Z^ncols).
    """
    at = [tuple(r[i] for r in rows) for i in range(ncols)]  # A^T rows
    h, u = hnf_with_transform(at, len(rows))
    out = []
    for hrow, urow in zip(h, u):
        if all(x == 0 for x in hrow):
            out.append(primitive(urow))
    return out


def saturated_span_basis(rows, ncols):
    """Basis of span(rows) ∩ Z^ncols (saturated lattice basis)."""
    ker = integer_kernel(rows, ncols)
    if not ker:
        return [tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)]
    return integer_kernel(ker, ncols)


def column_hnf(cols_matrix):
    """Column HNF of a nonsingular integer matrix given as rows.

    Returns H (rows) lower-triangular with positive diagonal such that the
    column lattices of H and the input agree.
    """
    n = len(cols_matrix)
    at = [tuple(row[i] for row in cols_matrix) for i in range(n)]
    h, _ = hnf_with_transform(at, n)
    return [tuple(h[j][i] for j in range(n)) for i in range(n)]
