"""Divisor and curve lattices of the blow-up of P^n x P^m at s general points.

Divisor classes live in the basis (H1, H2, E_1..E_s): H_j is the pullback of a
hyperplane from the j-th factor and E_i the exceptional divisor over the i-th
point.  Curve classes live in the dual basis (l1, l2, e_1..e_s), where l_j is a
line in a general fibre of the other projection and e_i a line in E_i.  The
intersection pairing is H_i.l_j = delta_ij, E_i.e_j = -delta_ij, cross terms 0.

A divisor class is stored as D = d1*H1 + d2*H2 - sum(m_i * E_i); its table row
(the serialisation used everywhere, matching the column order H1 H2 E1 ... Es)
is the integer vector (d1, d2, -m_1, ..., -m_s).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class BlowupSpace:
    """The blow-up of P^n x P^m at s points in general position."""

    n: int
    m: int
    s: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0 or self.s < 0:
            raise LatticeError("factor dimensions and point count must be >= 0")

    @property
    def rank(self) -> int:
        """Rank of the divisor lattice: s + 2."""
        return self.s + 2

    def __str__(self):
        return f"X^({self.n},{self.m})_{self.s}"


@dataclass(frozen=True)
class DivisorClass:
    """d1*H1 + d2*H2 - sum(mults[i] * E_{i+1})."""

    d1: int
    d2: int
    mults: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mults", tuple(self.mults))

    @property
    def s(self) -> int:
        return len(self.mults)

    def row(self) -> tuple[int, ...]:
        """Table row (d1, d2, -m_1, ..., -m_s)."""
        return (self.d1, self.d2, *(-m for m in self.mults))

    @classmethod
    def from_row(cls, row) -> "DivisorClass":
        row = tuple(row)
        if len(row) < 2:
            raise LatticeError("divisor row needs at least (d1, d2)")
        return cls(row[0], row[1], tuple(-x for x in row[2:]))

    def __add__(self, other):
        _same_length(self, other)
        return DivisorClass(self.d1 + other.d1, self.d2 + other.d2,
                            tuple(a + b for a, b in zip(self.mults, other.mults)))

    def __sub__(self, other):
        _same_length(self, other)
        return DivisorClass(self.d1 - other.d1, self.d2 - other.d2,
                            tuple(a - b for a, b in zip(self.mults, other.mults)))

    def __rmul__(self, c: int):
        return DivisorClass(c * self.d1, c * self.d2, tuple(c * m for m in self.mults))

    def __neg__(self):
        return -1 * self

    def __str__(self):
        terms = []
        if self.d1:
            terms.append(_coeff(self.d1, "H1"))
        if self.d2:
            terms.append(_coeff(self.d2, "H2"))
        for i, m in enumerate(self.mults, start=1):
            if m:
                terms.append(_coeff(-m, f"E{i}"))
        return _join_terms(terms)


@dataclass(frozen=True)
class CurveClass:
    """a1*l1 + a2*l2 - sum(excs[i] * e_{i+1})."""

    a1: int
    a2: int
    excs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "excs", tuple(self.excs))

    @property
    def s(self) -> int:
        return len(self.excs)

    def __add__(self, other):
        return CurveClass(self.a1 + other.a1, self.a2 + other.a2,
                          tuple(a + b for a, b in zip(self.excs, other.excs)))

    def __rmul__(self, c: int):
        return CurveClass(c * self.a1, c * self.a2, tuple(c * b for b in self.excs))

    def __str__(self):
        terms = []
        if self.a1:
            terms.append(_coeff(self.a1, "l1"))
        if self.a2:
            terms.append(_coeff(self.a2, "l2"))
        for i, b in enumerate(self.excs, start=1):
            if b:
                terms.append(_coeff(-b, f"e{i}"))
        return _join_terms(terms)


def _coeff(c, sym):
    if c == 1:
        return f"+{sym}"
    if c == -1:
        return f"-{sym}"
    return f"{c:+d}{sym}"


def _join_terms(terms):
    if not terms:
        return "0"
    out = "".join(terms)
    return out[1:] if out.startswith("+") else out


def _same_length(a, b):
    if len(a.mults) != len(b.mults):
        raise LatticeError("divisor classes have different numbers of points")


# Basis elements -------------------------------------------------------------

def h1(space: BlowupSpace) -> DivisorClass:
    return DivisorClass(1, 0, (0,) * space.s)


def h2(space: BlowupSpace) -> DivisorClass:
    return DivisorClass(0, 1, (0,) * space.s)


def exceptional(space: BlowupSpace, i: int) -> DivisorClass:
    _check_index(space, i)
    return DivisorClass(0, 0, tuple(-1 if j == i else 0 for j in range(1, space.s + 1)))


def line1(space: BlowupSpace) -> CurveClass:
    return CurveClass(1, 0, (0,) * space.s)


def line2(space: BlowupSpace) -> CurveClass:
    return CurveClass(0, 1, (0,) * space.s)


def exc_curve(space: BlowupSpace, i: int) -> CurveClass:
    _check_index(space, i)
    return CurveClass(0, 0, tuple(-1 if j == i else 0 for j in range(1, space.s + 1)))


def divisor(space: BlowupSpace, d1: int, d2: int, mults) -> DivisorClass:
    mults = tuple(mults)
    if len(mults) != space.s:
        raise LatticeError(f"expected {space.s} multiplicities, got {len(mults)}")
    return DivisorClass(d1, d2, mults)


def curve(space: BlowupSpace, a1: int, a2: int, excs) -> CurveClass:
    excs = tuple(excs)
    if len(excs) != space.s:
        raise LatticeError(f"expected {space.s} exceptional coefficients, got {len(excs)}")
    return CurveClass(a1, a2, excs)


def _check_index(space, i):
    if not 1 <= i <= space.s:
        raise LatticeError(f"point index {i} out of range 1..{space.s}")


# Operations -----------------------------------------------------------------

def pair(space: BlowupSpace, D: DivisorClass, C: CurveClass) -> int:
    """Intersection number D.C = d1*a1 + d2*a2 - sum(m_i * b_i)."""
    if D.s != space.s or C.s != space.s:
        raise LatticeError("class not dimensioned for this space")
    return D.d1 * C.a1 + D.d2 * C.a2 - sum(m * b for m, b in zip(D.mults, C.excs))


def anticanonical(space: BlowupSpace) -> DivisorClass:
    """-K = (n+1)H1 + (n+2)H2 - 2n * sum(E_i), for the m = n+1 spaces."""
    if space.m != space.n + 1:
        raise LatticeError("anticanonical class implemented only for m = n+1")
    n = space.n
    return DivisorClass(n + 1, n + 2, (2 * n,) * space.s)


def mori_generators(space: BlowupSpace) -> list[CurveClass]:
    """Generators e_i and l_j - e_i of the cone of curves.

    Valid under the hypothesis n, m >= 2 and s <= n+m; outside that range the
    generator list is not known to span and the call is refused.
    """
    if space.n < 2 or space.m < 2 or space.s > space.n + space.m:
        raise LatticeError(
            f"cone-of-curves generators require n, m >= 2 and s <= n+m; got {space}")
    gens: list[CurveClass] = []
    for i in range(1, space.s + 1):
        gens.append(exc_curve(space, i))  # e_i
    for line in (line1(space), line2(space)):
        for i in range(1, space.s + 1):
            gens.append(line + (-1) * exc_curve(space, i))  # l_j - e_i
    return gens


def canonical_rep(D: DivisorClass) -> DivisorClass:
    """Orbit representative: multiplicities sorted non-increasing."""
    return DivisorClass(D.d1, D.d2, tuple(sorted(D.mults, reverse=True)))


def orbit(space: BlowupSpace, D: DivisorClass) -> set[DivisorClass]:
    """All distinct classes obtained by permuting the multiplicities."""
    if D.s != space.s:
        raise LatticeError("class not dimensioned for this space")
    return {DivisorClass(D.d1, D.d2, p) for p in set(permutations(D.mults))}
