"""The Cone Method, end to end, with verification against stored tables.

Stage 1 cuts a movable-candidate cone out of the divisor space by effectivity
inequalities and base-locus bounds (each movable class must have every bound
clamp to zero).  Stage 2 adjoins the known fixed divisor classes to the stage-1
generators and takes the cone they span: when every generator of the result is
the class of an effective divisor, that cone is the effective cone.

Cones live in the table coordinates (d1, d2, e_1..e_s), e_i = -m_i, matching
the row serialisation of DivisorClass, and all tables are compared up to
permutation of the E-columns (orbit representatives: multiplicities sorted
non-increasing, i.e. rows with E-entries non-decreasing).
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from math import factorial
from pathlib import Path

from . import ineq
from .cone import (RationalCone, inequalities_from_rays, is_extremal,
                   parse_cone_text, rays_from_inequalities, contains)
from .ineq import LinearFunctional, inequality_row
from .lattice import BlowupSpace, DivisorClass

FIXTURE_ENV = "BICONES_FIXTURES"


class PipelineError(ValueError):
    pass


@dataclass(frozen=True)
class ConeMethodConfig:
    space: BlowupSpace
    inequalities: tuple  # LinearFunctional / KappaFormula, mixed
    fixed_classes: tuple[DivisorClass, ...]
    reference_id: str | None = None


@dataclass(frozen=True)
class ConeMethodResult:
    config: ConeMethodConfig
    movable_candidate: RationalCone
    effective: RationalCone


@dataclass(frozen=True)
class TableReport:
    table_id: str
    computed: tuple[tuple[int, ...], ...]  # orbit representative rows
    expected: tuple[tuple[int, ...], ...]

    @property
    def matched(self) -> bool:
        return set(self.computed) == set(self.expected)

    @property
    def missing(self):
        return tuple(sorted(set(self.expected) - set(self.computed)))

    @property
    def extra(self):
        return tuple(sorted(set(self.computed) - set(self.expected)))

    def to_json_dict(self) -> dict:
        return {"table": self.table_id, "matched": self.matched,
                "computed": [list(r) for r in self.computed],
                "expected": [list(r) for r in self.expected],
                "missing": [list(r) for r in self.missing],
                "extra": [list(r) for r in self.extra]}


# Orbits of table rows -----------------------------------------------------------

def orbit_rep_row(row) -> tuple[int, ...]:
    """Canonical representative: E-entries sorted non-decreasing (equivalently
    multiplicities non-increasing)."""
    return (row[0], row[1], *sorted(row[2:]))


def orbit_table(rows):
    return tuple(sorted({orbit_rep_row(r) for r in rows}))


def orbit_size(row) -> int:
    tail = list(row[2:])
    size = factorial(len(tail))
    for v in set(tail):
        size //= factorial(tail.count(v))
    return size


def expand_orbits(rows):
    from itertools import permutations
    out = set()
    for r in rows:
        for p in set(permutations(r[2:])):
            out.add((r[0], r[1]) + p)
    return tuple(sorted(out))


# Parametric tables for the blow-up at n+2 points ---------------------------------

def eff_generators_n_plus_2(n: int):
    """Generator rows: E_i, H1 - sum_I E_i (|I| = n), H2 - sum_I E_i (|I| = n+1)."""
    s = n + 2
    rows = []
    for i in range(s):
        rows.append(tuple([0, 0] + [1 if j == i else 0 for j in range(s)]))
    for I in combinations(range(s), n):
        rows.append(tuple([1, 0] + [-1 if j in I else 0 for j in range(s)]))
    for I in combinations(range(s), n + 1):
        rows.append(tuple([0, 1] + [-1 if j in I else 0 for j in range(s)]))
    return tuple(sorted(rows))


def eff_inequalities_n_plus_2(n: int):
    """Facet rows: d_j >= 0; d1+d2 >= m_i; n*d1+(n+1)*d2 >= sum_I m_i for
    |I| in {n+1, n+2}."""
    s = n + 2
    rows = [tuple([1, 0] + [0] * s), tuple([0, 1] + [0] * s)]
    for i in range(s):
        rows.append(tuple([1, 1] + [1 if j == i else 0 for j in range(s)]))
    for size in (n + 1, n + 2):
        for I in combinations(range(s), size):
            rows.append(tuple([n, n + 1] + [1 if j in I else 0 for j in range(s)]))
    return tuple(sorted(rows))


def mov_inequalities_n_plus_2(n: int):
    """Effective-cone rows plus m_i >= 0, (n-1)d1+n*d2 >= sum_{|I|=n} m_i and
    n(d1+d2) >= sum_{|I|=n+1} m_i."""
    s = n + 2
    rows = list(eff_inequalities_n_plus_2(n))
    for i in range(s):
        rows.append(tuple([0, 0] + [-1 if j == i else 0 for j in range(s)]))
    for I in combinations(range(s), n):
        rows.append(tuple([n - 1, n] + [1 if j in I else 0 for j in range(s)]))
    for I in combinations(range(s), n + 1):
        rows.append(tuple([n, n] + [1 if j in I else 0 for j in range(s)]))
    return tuple(sorted(set(rows)))


def mov_candidate_generators_n_plus_2(n: int):
    """The six candidate families of movable generators on the n+2-point space."""
    s = n + 2
    pts = range(s)
    out = set()

    def row(d1, d2, coeff):
        return tuple([d1, d2] + [coeff.get(i, 0) for i in pts])

    for size in range(0, n):
        for I in combinations(pts, size):
            out.add(row(1, 0, {i: -1 for i in I}))
    for size in range(0, n + 1):
        for I in combinations(pts, size):
            out.add(row(0, 1, {i: -1 for i in I}))
    for k in range(2, n + 1):
        for I in combinations(pts, k + 1):
            for j in pts:
                if j in I:
                    continue
                for eps in (0, 1):
                    c = {i: -k for i in pts if i not in I and i != j}
                    c.update({i: -(k - 1) for i in I})
                    c[j] = -eps
                    out.add(row(k, 0, c))
    for k in range(2, n + 2):
        for I in combinations(pts, k + 1):
            c = {i: -k for i in pts if i not in I}
            c.update({i: -(k - 1) for i in I})
            out.add(row(0, k, c))
    for k in range(1, n + 1):
        for I in combinations(pts, k + 1):
            for j in pts:
                if j in I:
                    continue
                for eps in (0, 1):
                    c = {i: -(k + 1) for i in pts if i not in I and i != j}
                    c.update({i: -k for i in I})
                    c[j] = -eps
                    out.add(row(k, 1, c))
    for k in range(1, n + 1):
        for I in combinations(pts, k + 2):
            c = {i: -(k + 1) for i in pts if i not in I}
            c.update({i: -k for i in I})
            out.add(row(1, k, c))
    return tuple(sorted(out))


# Inequality bundles --------------------------------------------------------------

def pullback_inequalities(space: BlowupSpace, sub_rows) -> list[LinearFunctional]:
    """Lift the inequality rows of the cone on one point fewer: for each of the
    s choices of omitted point, insert coefficient 0 at the omitted slot."""
    s = space.s
    seen = set()
    out = []
    for omit in range(1, s + 1):
        for row in sub_rows:
            if len(row) != s + 1:
                raise PipelineError("sub-cone rows must have one fewer E-column")
            lifted = list(row[:2])
            tail = list(row[2:])
            lifted += tail[:omit - 1] + [0] + tail[omit - 1:]
            key = tuple(lifted)
            if key in seen:
                continue
            seen.add(key)
            coeffs = (key[0], key[1], *(-x for x in key[2:]))
            out.append(LinearFunctional(
                coeffs, f"pullback(omit={omit}):{' '.join(map(str, row))}",
                "effectivity"))
    return out


def _chi_class(s, d1, d2, I, val=1):
    return DivisorClass(d1, d2, tuple(val if i in I else 0 for i in range(1, s + 1)))


def x235_config() -> ConeMethodConfig:
    """Inequalities and fixed classes for the blow-up of P^2 x P^3 at 5 points.

    The bundle combines: pullbacks of the 4-point effective cone; the
    exceptional bounds; the bounds for the fixed hyperplane pullbacks, point
    spans, the conic pullback Q and the second bilinear secant S; the
    effectivity bound from the joins of the curve with point pairs; and the
    covering-curve bounds on Q (curves of class 2l1+4l2-sum e) and on the
    plane pullbacks (curves of class 3l1+5l2-2e_i-2e_j-2e_k), which complete
    the facet description of the movable cone.
    """
    space = BlowupSpace(2, 3, 5)
    pts = range(1, 6)
    bundle: list = []
    bundle += pullback_inequalities(space, eff_inequalities_n_plus_2(2))
    bundle += [ineq.kappa_exceptional(space, i) for i in pts]
    bundle += [ineq.kappa_pullback_hyperplane(space, I) for I in combinations(pts, 2)]
    bundle += [ineq.kappa_bilinear_span(space, I) for I in combinations(pts, 3)]
    bundle.append(ineq.kappa_pullback_cone(space, 1, ()))
    bundle.append(ineq.kappa_bisecant(space, 2))
    bundle.append(ineq.kappa_covering_curve(
        space, DivisorClass(1, 2, (2,) * 5), 3, 3, (1,) * 5, "BS2"))
    bundle += [ineq.kappa_bilinear_join(space, 1, I) for I in combinations(pts, 2)]
    bundle.append(ineq.kappa_covering_curve(
        space, DivisorClass(2, 0, (1,) * 5), 2, 4, (1,) * 5, "Q"))
    for I in combinations(pts, 3):
        excs = tuple(2 if i in I else 0 for i in range(1, 6))
        bundle.append(ineq.kappa_covering_curve(
            space, _chi_class(5, 0, 1, I), 3, 5, excs, f"Pi2{set(I)}"))
    fixed = [_chi_class(5, 0, 0, {i}, -1) for i in pts]
    fixed += [_chi_class(5, 1, 0, I) for I in combinations(pts, 2)]
    fixed += [_chi_class(5, 0, 1, I) for I in combinations(pts, 3)]
    fixed.append(DivisorClass(2, 0, (1,) * 5))   # Q
    fixed.append(DivisorClass(1, 2, (2,) * 5))   # second bilinear secant
    return ConeMethodConfig(space, tuple(bundle), tuple(fixed), "x235-eff")


def x346_config() -> ConeMethodConfig:
    """Inequalities and fixed classes for the blow-up of P^3 x P^4 at 6 points.

    The bundle combines: pullbacks of the 5-point effective cone; exceptional
    bounds; bounds for the spans of 4 points, the quadric-cone pullbacks Q_i
    (joins of the distinguished curve with a point fibre, detected by curves
    of class 4l1+6l2-sum e-e_i) and the joins D_i of the second bilinear
    secant with a point; and the three extra effectivity families.
    """
    space = BlowupSpace(3, 4, 6)
    pts = range(1, 7)
    bundle: list = []
    bundle += pullback_inequalities(space, eff_inequalities_n_plus_2(3))
    bundle += [ineq.kappa_exceptional(space, i) for i in pts]
    bundle += [ineq.kappa_bilinear_span(space, I) for I in combinations(pts, 4)]
    for i in pts:
        q_i = DivisorClass(2, 0, tuple(2 if j == i else 1 for j in range(1, 7)))
        excs = tuple(2 if j == i else 1 for j in range(1, 7))
        bundle.append(ineq.kappa_covering_curve(space, q_i, 4, 6, excs, f"Q_{i}"))
    bundle += [ineq.kappa_bilinear_join(space, 2, (i,)) for i in pts]
    bundle += ineq.effectivity_x346(space)
    fixed = [_chi_class(6, 0, 0, {i}, -1) for i in pts]
    fixed += [_chi_class(6, 1, 0, I) for I in combinations(pts, 3)]
    fixed += [_chi_class(6, 0, 1, I) for I in combinations(pts, 4)]
    for i in pts:
        fixed.append(DivisorClass(2, 0, tuple(2 if j == i else 1 for j in range(1, 7))))
        fixed.append(DivisorClass(1, 2, tuple(3 if j == i else 2 for j in range(1, 7))))
    return ConeMethodConfig(space, tuple(bundle), tuple(fixed), "x346-eff")


def cone_method(config: ConeMethodConfig) -> ConeMethodResult:
    """Run both stages: cut the movable-candidate cone, then adjoin the fixed
    classes and span the effective cone."""
    if not config.inequalities:
        raise PipelineError("empty inequality bundle")
    if not config.fixed_classes:
        raise PipelineError("no fixed classes to adjoin")
    dim = config.space.rank
    rows = sorted({inequality_row(f) for f in config.inequalities})
    stage1 = rays_from_inequalities(rows, dim)
    gens = set(stage1.generators)
    gens.update(cls.row() for cls in config.fixed_classes)
    stage2 = inequalities_from_rays(sorted(gens), dim)
    return ConeMethodResult(config, stage1, stage2)


def movable_candidate_in_effective(result: ConeMethodResult) -> bool:
    return all(contains(result.effective, g)
               for g in result.movable_candidate.generators)


# Stored reference tables ----------------------------------------------------------

def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> RationalCone:
    path = fixture_dir() / f"{name}.cone"
    if not path.exists():
        raise PipelineError(f"no stored table {name!r} at {path}")
    return parse_cone_text(path.read_text())


_TABLE_IDS = ("x235-eff", "x235-mov", "x346-eff", "eff-n+2", "mov-n+2")

_MOV_N_GUARD = 5


def verify_table(table_id: str, n: int | None = None,
                 allow_large: bool = False) -> TableReport:
    """Recompute a stored generator table and diff it orbit by orbit."""
    if table_id in ("x235-eff", "x235-mov"):
        result = cone_method(x235_config())
        cone = result.effective if table_id == "x235-eff" else result.movable_candidate
        expected = orbit_table(load_fixture(table_id).generators)
        return TableReport(table_id, orbit_table(cone.generators), expected)
    if table_id == "x346-eff":
        result = cone_method(x346_config())
        expected = orbit_table(load_fixture(table_id).generators)
        return TableReport(table_id, orbit_table(result.effective.generators), expected)
    if table_id == "eff-n+2":
        if n is None or n < 1:
            raise PipelineError("eff-n+2 needs n >= 1")
        cone = rays_from_inequalities(eff_inequalities_n_plus_2(n), n + 4)
        return TableReport(f"eff-n+2:{n}", orbit_table(cone.generators),
                           orbit_table(eff_generators_n_plus_2(n)))
    if table_id == "mov-n+2":
        if n is None or n < 1:
            raise PipelineError("mov-n+2 needs n >= 1")
        if n > _MOV_N_GUARD and not allow_large:
            raise PipelineError(
                f"mov-n+2 capped at n <= {_MOV_N_GUARD} by default; pass allow_large")
        cone = rays_from_inequalities(mov_inequalities_n_plus_2(n), n + 4)
        return TableReport(f"mov-n+2:{n}", orbit_table(cone.generators),
                           orbit_table(mov_candidate_generators_n_plus_2(n)))
    raise PipelineError(f"unknown table id {table_id!r}; known: {', '.join(_TABLE_IDS)}")


def bsj_divisor_classes(n: int) -> list[DivisorClass]:
    """Divisor classes of the bilinear secant-and-join divisors on the
    n+3-point space: joins of BS_k of the distinguished curve with l points,
    3k + 2l - 2 = 2n, class ((n+1-l)/3... constructed per case."""
    if n == 2:
        return [DivisorClass(1, 2, (2,) * 5)]
    if n == 3:
        return [DivisorClass(1, 2, tuple(3 if j == i else 2 for j in range(1, 7)))
                for i in range(1, 7)]
    raise PipelineError("bilinear secant-and-join divisors computed for n in {2, 3}")


def bsj_extremality(n: int, classes=None) -> list[tuple[DivisorClass, bool]]:
    """Extremality verdicts for the given classes (default: the bilinear
    secant-and-join divisors) in the computed effective cone."""
    if n == 2:
        eff = cone_method(x235_config()).effective
    elif n == 3:
        eff = cone_method(x346_config()).effective
    else:
        raise PipelineError("effective cone available for n in {2, 3}")
    if classes is None:
        classes = bsj_divisor_classes(n)
    return [(cls, is_extremal(eff, cls.row())) for cls in classes]


def render_orbit_table(s: int, rows, note: str | None = None) -> str:
    header = ["H1", "H2"] + [f"E{i}" for i in range(1, s + 1)]
    width = max(3, max((len(str(x)) for r in rows for x in r), default=1) + 1)
    lines = [" ".join(h.rjust(width) for h in header),
             "-" * ((width + 1) * len(header) - 1)]
    for r in rows:
        lines.append(" ".join(str(x).rjust(width) for x in r))
    if note:
        lines.append(note)
    return "\n".join(lines)
