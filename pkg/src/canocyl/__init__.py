"""Canonical cylinders, slices and track decompositions on model hyperbolic graphs."""

from .constants import ConstantProfile, experiment_profile, parse_profile, theory_profile
from .cylinders import channels, cylinder, is_local_quasi_geodesic, is_quasi_geodesic, validate_cptg
from .errors import BudgetError, InputError, InvariantError, StructuralError
from .graph import (
    GraphAutomorphism,
    PreferredGeodesicFamily,
    SimpleGraph,
    all_geodesics,
    parse_graph,
    slim_delta,
)
from .slicing import diff, good_l_search, slice_partition, triangle_decomposition

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "ConstantProfile",
    "GraphAutomorphism",
    "InputError",
    "InvariantError",
    "PreferredGeodesicFamily",
    "SimpleGraph",
    "StructuralError",
    "all_geodesics",
    "channels",
    "cylinder",
    "diff",
    "experiment_profile",
    "good_l_search",
    "is_local_quasi_geodesic",
    "is_quasi_geodesic",
    "parse_graph",
    "parse_profile",
    "slice_partition",
    "slim_delta",
    "theory_profile",
    "triangle_decomposition",
    "validate_cptg",
]
