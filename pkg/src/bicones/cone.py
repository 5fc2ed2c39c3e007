"""Exact rational polyhedral cone engine.

Converts between the two descriptions of a pointed rational cone (generator
rays and inequality rows), always over arbitrary-precision integers:

* rays_from_inequalities: double description method with the combinatorial
  adjacency test, inequalities inserted most-zeros-first;
* inequalities_from_rays: the dual direction, run on the polar cone (inside
  the linear span when the cone is lower-dimensional);
* hilbert_basis: placing triangulation into simplicial subcones, lattice
  points of fundamental parallelepipeds, then a global minimality reduction.

All stored rows are primitive integer vectors and every returned list is
canonically sorted, so output is deterministic and independent of input order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from ._linalg import (adjugate, clear_denominators, det, dot, independent_subset,
                      integer_kernel, column_hnf, primitive, rank,
                      saturated_span_basis, solve_fraction)


class ConeError(ValueError):
    pass


class NonPointedError(ConeError):
    pass


class ConeFormatError(ConeError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _canonical_rows(rows, dim):
    out = set()
    for r in rows:
        r = tuple(r)
        if len(r) != dim:
            raise ConeError(f"row of length {len(r)} in ambient dimension {dim}")
        if any(x != 0 for x in r):
            out.add(primitive(r))
    return tuple(sorted(out))


@dataclass(frozen=True)
class RationalCone:
    """A pointed rational cone, carried by generator rows and/or inequality rows.

    ``equations`` is nonempty only for cones that are not full-dimensional in
    their ambient space: the cone is then {x : inequalities >= 0, equations = 0}
    and the inequality rows cut the facets inside the linear span.
    """

    ambient_dim: int
    generators: tuple[tuple[int, ...], ...] | None = None
    inequalities: tuple[tuple[int, ...], ...] | None = None
    equations: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ConeError("ambient dimension must be positive")
        if self.generators is None and self.inequalities is None:
            raise ConeError("a cone needs generators or inequalities")

    @classmethod
    def from_generators(cls, rows, ambient_dim):
        return cls(ambient_dim, generators=_canonical_rows(rows, ambient_dim))

    @classmethod
    def from_inequalities(cls, rows, ambient_dim):
        return cls(ambient_dim, inequalities=_canonical_rows(rows, ambient_dim))

    @property
    def full_dimensional(self) -> bool:
        return not self.equations

    def dim(self) -> int:
        """Dimension of the linear span of the cone."""
        gens = self.with_generators().generators
        return rank(gens)

    def with_generators(self) -> "RationalCone":
        if self.generators is not None:
            return self
        return rays_from_inequalities(self.inequalities, self.ambient_dim)

    def with_inequalities(self) -> "RationalCone":
        if self.inequalities is not None:
            return self
        return inequalities_from_rays(self.generators, self.ambient_dim)


@dataclass(frozen=True)
class HilbertBasis:
    """Minimal generating set of the monoid of lattice points of a pointed cone."""

    elements: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


# Double description --------------------------------------------------------

def _dd_extremal_rays(rows, dim):
    """Extremal rays of {x : r.x >= 0 for r in rows}; assumes rank(rows) == dim."""
    ordered = sorted(rows, key=lambda r: (sum(1 for x in r if x != 0), r))
    basis_pos = independent_subset(ordered)
    basis = [ordered[i] for i in basis_pos]
    adj = adjugate(basis)
    if det(basis) < 0:
        adj = [[-x for x in row] for row in adj]
    rays = [primitive(tuple(adj[i][j] for i in range(dim))) for j in range(dim)]

    processed = list(basis)
    masks = [_tight_mask(r, processed) for r in rays]
    need = max(dim - 2, 0)

    remaining = [ordered[i] for i in range(len(ordered)) if i not in set(basis_pos)]
    for row in remaining:
        vals = [dot(row, r) for r in rays]
        bit = 1 << len(processed)
        if all(v >= 0 for v in vals):
            masks = [m | bit if v == 0 else m for m, v in zip(masks, vals)]
            processed.append(row)
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        new_rays = []
        for p in pos:
            mp = masks[p]
            for q in neg:
                common = mp & masks[q]
                if common.bit_count() < need:
                    continue
                adjacent = True
                for t, mt in enumerate(masks):
                    if t != p and t != q and common & mt == common:
                        adjacent = False
                        break
                if adjacent:
                    vp, vq = vals[p], vals[q]
                    new = tuple(-vq * a + vp * b for a, b in zip(rays[p], rays[q]))
                    new_rays.append(primitive(new))
        processed.append(row)
        kept_rays = [rays[i] for i in zero + pos]
        kept_masks = [masks[i] | bit for i in zero] + [masks[i] for i in pos]
        for r in new_rays:
            kept_rays.append(r)
            kept_masks.append(_tight_mask(r, processed))
        rays, masks = kept_rays, kept_masks
    return tuple(sorted(rays))


def _tight_mask(ray, rows):
    m = 0
    for i, row in enumerate(rows):
        if dot(row, ray) == 0:
            m |= 1 << i
    return m


def rays_from_inequalities(ineqs, ambient_dim) -> RationalCone:
    """Generators (extremal rays) of the pointed cone {x : A x >= 0}.

    Raises NonPointedError when the inequality rows do not define a pointed
    cone, in particular for an empty inequality set in positive dimension.
    """
    rows = _canonical_rows(ineqs, ambient_dim)
    if rank(rows) < ambient_dim:
        raise NonPointedError(
            "inequalities define a non-pointed cone (kernel is nontrivial)")
    rays = _dd_extremal_rays(rows, ambient_dim)
    return RationalCone(ambient_dim, generators=rays, inequalities=rows)


def inequalities_from_rays(gens, ambient_dim) -> RationalCone:
    """Facet description of the cone spanned by the given rays.

    For a full-dimensional cone the inequality rows are exactly the facets.
    Otherwise the facets are taken inside the linear span and the span itself
    is recorded through the ``equations`` rows (lower-dimensional cone).
    The returned generators are reduced to the extremal rays.
    """
    rows = _canonical_rows(gens, ambient_dim)
    if not rows:
        raise ConeError("cannot compute facets of a cone with no generators")
    r = rank(rows)
    if r == ambient_dim:
        facets = _dd_extremal_rays(rows, ambient_dim)
        if rank(facets) < ambient_dim:
            raise NonPointedError("generators span a non-pointed cone")
        extremal = _extremal_subset(rows, facets, (), ambient_dim)
        return RationalCone(ambient_dim, generators=extremal, inequalities=facets)

    span = saturated_span_basis(rows, ambient_dim)  # r rows
    gram = [[dot(a, b) for b in span] for a in span]
    coords = []
    for g in rows:
        sol = solve_fraction(gram, [dot(a, g) for a in span])
        assert all(x.denominator == 1 for x in sol)
        coords.append(tuple(int(x) for x in sol))
    sub = inequalities_from_rays(coords, r)
    facets = []
    for f in sub.inequalities:
        y = solve_fraction(gram, f)
        ambient = [sum(y[i] * span[i][j] for i in range(r)) for j in range(ambient_dim)]
        facets.append(clear_denominators(ambient))
    coord_to_ambient = dict(zip(coords, rows))
    extremal = tuple(sorted(coord_to_ambient[c] for c in sub.generators))
    equations = tuple(sorted(primitive(e) for e in integer_kernel(rows, ambient_dim)))
    return RationalCone(ambient_dim, generators=extremal,
                        inequalities=tuple(sorted(facets)), equations=equations)


def _extremal_subset(rows, facets, equations, dim):
    codim = len(equations) and rank(equations) or 0
    target = dim - codim - 1
    out = []
    for g in rows:
        tight = [f for f in facets if dot(f, g) == 0]
        if rank(list(tight) + list(equations)) == target + codim:
            out.append(g)
    return tuple(sorted(out))


def spanned_cone(gens, ambient_dim) -> RationalCone:
    """Cone spanned by arbitrary generators, reduced to extremal rays + facets."""
    return inequalities_from_rays(gens, ambient_dim)


# Predicates -----------------------------------------------------------------

def contains(cone: RationalCone, v) -> bool:
    v = tuple(v)
    if len(v) != cone.ambient_dim:
        raise ConeError("vector has wrong dimension")
    cone = cone.with_inequalities()
    return (all(dot(row, v) >= 0 for row in cone.inequalities)
            and all(dot(row, v) == 0 for row in cone.equations))


def is_extremal(cone: RationalCone, v) -> bool:
    """Whether v spans an extremal ray: tight inequalities have rank dim-1."""
    v = tuple(v)
    if all(x == 0 for x in v):
        return False
    cone = cone.with_inequalities()
    if not contains(cone, v):
        return False
    tight = [row for row in cone.inequalities if dot(row, v) == 0]
    return rank(tight + list(cone.equations)) == cone.ambient_dim - 1


def equal(a: RationalCone, b: RationalCone) -> bool:
    """Cone equality via mutual containment of generators."""
    if a.ambient_dim != b.ambient_dim:
        raise ConeError("cones live in different ambient dimensions")
    a = a.with_generators()
    b = b.with_generators()
    return (all(contains(b, g) for g in a.generators)
            and all(contains(a, g) for g in b.generators))


# Hilbert basis ---------------------------------------------------------------

_HILBERT_DIM_GUARD = 12


def hilbert_basis(cone: RationalCone) -> HilbertBasis:
    """Minimal generating set of the monoid cone ∩ Z^d (pointed cones only)."""
    if cone.ambient_dim > _HILBERT_DIM_GUARD:
        raise ConeError(
            f"hilbert_basis guard: ambient dimension {cone.ambient_dim} > {_HILBERT_DIM_GUARD}")
    cone = cone.with_generators().with_inequalities()
    if rank(list(cone.inequalities) + list(cone.equations)) < cone.ambient_dim:
        raise NonPointedError("hilbert basis requires a pointed cone")
    rays = cone.generators
    if not rays:
        return HilbertBasis(())
    d = cone.ambient_dim
    if rank(rays) < d:
        # Work inside the saturated span lattice, then map back.
        span = saturated_span_basis(rays, d)
        r = len(span)
        gram = [[dot(a, b) for b in span] for a in span]
        coords = []
        for g in rays:
            sol = solve_fraction(gram, [dot(a, g) for a in span])
            coords.append(tuple(int(x) for x in sol))
        sub = hilbert_basis(RationalCone.from_generators(coords, r))
        lifted = [tuple(sum(c[i] * span[i][j] for i in range(r)) for j in range(d))
                  for c in sub.elements]
        return HilbertBasis(tuple(sorted(lifted)))

    candidates = set(rays)
    for simplex in _placing_triangulation(rays, d):
        candidates.update(_parallelepiped_points([rays[i] for i in simplex], d))
    candidates.discard((0,) * d)

    def in_cone(v):
        return all(dot(row, v) >= 0 for row in cone.inequalities)

    elements = []
    cand = sorted(candidates)
    for x in cand:
        reducible = False
        for y in cand:
            if y == x:
                continue
            z = tuple(a - b for a, b in zip(x, y))
            if any(c != 0 for c in z) and in_cone(z) and in_cone(y):
                reducible = True
                break
        if not reducible:
            elements.append(x)
    return HilbertBasis(tuple(elements))


def _placing_triangulation(rays, d):
    """Triangulate a full-dimensional pointed cone given by its extremal rays."""
    order = list(range(len(rays)))
    init = independent_subset([rays[i] for i in order])
    simplices = [tuple(sorted(init))]
    current = sorted(init)
    for i in order:
        if i in init:
            continue
        facets = inequalities_from_rays([rays[j] for j in current], d).inequalities
        visible = [f for f in facets if dot(f, rays[i]) < 0]
        new = set()
        for f in visible:
            for simplex in simplices:
                face = tuple(j for j in simplex if dot(f, rays[j]) == 0)
                if len(face) == d - 1:
                    new.add(tuple(sorted(face + (i,))))
        simplices.extend(sorted(new))
        current.append(i)
    return simplices


def _parallelepiped_points(simplex_rays, d):
    """Lattice points in {sum l_i r_i : 0 <= l_i < 1}, the zero point excluded."""
    vmat = [[simplex_rays[j][i] for j in range(d)] for i in range(d)]  # columns = rays
    h = column_hnf(vmat)
    diag = [h[i][i] for i in range(d)]
    points = []
    for x in product(*(range(k) for k in diag)):
        if all(c == 0 for c in x):
            continue
        lam = solve_fraction(vmat, x)
        floors = [l.numerator // l.denominator for l in lam]
        p = tuple(x[i] - sum(vmat[i][j] * floors[j] for j in range(d)) for i in range(d))
        if any(c != 0 for c in p):
            points.append(p)
    return points


# Interchange formats ---------------------------------------------------------

def format_cone_text(cone: RationalCone, comment: str | None = None) -> str:
    lines = []
    if comment:
        for c in comment.splitlines():
            lines.append(f"# {c}")
    lines.append(f"dim {cone.ambient_dim}")
    for name, rows in (("inequalities", cone.inequalities),
                       ("generators", cone.generators),
                       ("equations", cone.equations or None)):
        if rows is None:
            continue
        lines.append(f"{name} {len(rows)}")
        for r in rows:
            lines.append(" ".join(str(x) for x in r))
    return "\n".join(lines) + "\n"


def parse_cone_text(text: str) -> RationalCone:
    dim = None
    blocks: dict[str, list[tuple[int, ...]]] = {}
    pending: tuple[str, int] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if pending is not None:
            name, left = pending
            try:
                row = tuple(int(t) for t in toks)
            except ValueError:
                raise ConeFormatError(f"expected integer row for '{name}'", lineno)
            if dim is not None and len(row) != dim:
                raise ConeFormatError(
                    f"row has {len(row)} entries, expected {dim}", lineno)
            blocks[name].append(row)
            pending = (name, left - 1) if left > 1 else None
            continue
        if toks[0] == "dim":
            if dim is not None:
                raise ConeFormatError("duplicate 'dim' line", lineno)
            try:
                dim = int(toks[1])
            except (IndexError, ValueError):
                raise ConeFormatError("malformed 'dim' line", lineno)
        elif toks[0] in ("inequalities", "generators", "equations"):
            if dim is None:
                raise ConeFormatError("'dim' must come before any block", lineno)
            try:
                count = int(toks[1])
            except (IndexError, ValueError):
                raise ConeFormatError(f"malformed '{toks[0]}' header", lineno)
            blocks.setdefault(toks[0], [])
            if count > 0:
                pending = (toks[0], count)
        else:
            raise ConeFormatError(f"unknown directive {toks[0]!r}", lineno)
    if pending is not None:
        raise ConeFormatError(f"unterminated '{pending[0]}' block", len(text.splitlines()))
    if dim is None:
        raise ConeFormatError("missing 'dim' line", 1)
    if not blocks:
        raise ConeFormatError("cone file has no blocks", 1)
    return RationalCone(
        dim,
        generators=tuple(blocks["generators"]) if "generators" in blocks else None,
        inequalities=tuple(blocks["inequalities"]) if "inequalities" in blocks else None,
        equations=tuple(blocks.get("equations", ())))


def cone_to_json(cone: RationalCone) -> str:
    data = {"dim": cone.ambient_dim}
    if cone.inequalities is not None:
        data["inequalities"] = [list(r) for r in cone.inequalities]
    if cone.generators is not None:
        data["generators"] = [list(r) for r in cone.generators]
    if cone.equations:
        data["equations"] = [list(r) for r in cone.equations]
    return json.dumps(data, indent=None, sort_keys=True)


def cone_from_json(text: str) -> RationalCone:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConeFormatError(f"invalid JSON: {exc.msg}", exc.lineno)
    if "dim" not in data:
        raise ConeFormatError("missing 'dim' field", 1)
    return RationalCone(
        data["dim"],
        generators=tuple(tuple(r) for r in data["generators"]) if "generators" in data else None,
        inequalities=tuple(tuple(r) for r in data["inequalities"]) if "inequalities" in data else None,
        equations=tuple(tuple(r) for r in data.get("equations", ())))
