"""Exact-arithmetic toolkit for canonical Fano polytopes and the volumes of their duals."""

__version__ = "0.1.0"

from .arith import bound_B, sylvester, theorem_bound
from .construct import GluingSpec, WeightSystem, glue, reflexive_R, simplex_from_weights, sylvester_simplex, weights
from .kernels import BACKEND
from .polytope import (
    RationalPolytope,
    dual,
    equivalent,
    hull,
    interior_lattice_points,
    is_canonical_fano,
    is_minimal,
    is_reflexive,
    lattice_points,
    normal_form,
    normalized_volume,
    volume,
)

__all__ = [
    "BACKEND",
    "GluingSpec",
    "RationalPolytope",
    "WeightSystem",
    "bound_B",
    "dual",
    "equivalent",
    "glue",
    "hull",
    "interior_lattice_points",
    "is_canonical_fano",
    "is_minimal",
    "is_reflexive",
    "lattice_points",
    "normal_form",
    "normalized_volume",
    "reflexive_R",
    "simplex_from_weights",
    "sylvester",
    "sylvester_simplex",
    "theorem_bound",
    "volume",
    "weights",
]
