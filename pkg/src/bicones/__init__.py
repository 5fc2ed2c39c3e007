"""Exact-arithmetic cones, base-locus bounds and log Fano certificates for
blow-ups of P^n x P^m at points in general position.

All computations are over arbitrary-precision integers and exact rationals;
there is no floating point anywhere in the package.
"""

from .lattice import (BlowupSpace, CurveClass, DivisorClass, anticanonical,
                      canonical_rep, mori_generators, orbit, pair)
from .cone import (HilbertBasis, RationalCone, contains, equal, hilbert_basis,
                   inequalities_from_rays, is_extremal, rays_from_inequalities)

__version__ = "0.1.0"

__all__ = [
    "BlowupSpace", "CurveClass", "DivisorClass", "anticanonical",
    "canonical_rep", "mori_generators", "orbit", "pair",
    "HilbertBasis", "RationalCone", "contains", "equal", "hilbert_basis",
    "inequalities_from_rays", "is_extremal", "rays_from_inequalities",
    "__version__",
]
