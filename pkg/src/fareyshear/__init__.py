"""Shear coordinates on the Farey tessellation and quasisymmetric boundary maps."""

from .errors import ConsistencyFailure, FareyShearError, NumericError, ValidationError
from .farey import (
    BASE_TRIANGLE,
    INFINITY,
    Edge,
    FareyVertex,
    Tessellation,
    Triangle,
    canonical_conjugator,
    dual_path,
    fan_window,
    tessellation_to_depth,
)
from .geom import (
    INF,
    Horocycle,
    MobiusMap,
    OrientedGeodesic,
    cross_ratio,
    horocyclic_arc_length,
    mobius_from_triples,
    translation_matrix,
)
from .qsdiag import ba_ratio, degeneration_scan, estimate_qs_constant, necessity_experiment
from .shear import (
    DevelopedMap,
    ShearFunction,
    check_condition,
    develop,
    fan_deltas,
    mirror,
    pullback,
    shear_from_map,
    single_fan_map,
)

__version__ = "0.1.0"

__all__ = [
    "BASE_TRIANGLE", "INF", "INFINITY",
    "ConsistencyFailure", "DevelopedMap", "Edge", "FareyShearError", "FareyVertex",
    "Horocycle", "MobiusMap", "NumericError", "OrientedGeodesic", "ShearFunction",
    "Tessellation", "Triangle", "ValidationError",
    "ba_ratio", "canonical_conjugator", "check_condition", "cross_ratio",
    "degeneration_scan", "develop", "dual_path", "estimate_qs_constant", "fan_deltas",
    "fan_window", "horocyclic_arc_length", "mirror", "mobius_from_triples",
    "necessity_experiment", "pullback", "shear_from_map", "single_fan_map",
    "tessellation_to_depth", "translation_matrix",
]
