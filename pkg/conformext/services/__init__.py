# conformext/services/__init__.py

from .bad_parametrization import (
    bad_parametrization,
    identity_plan,
    parametrization_from_plan,
    sample_disk_map,
    w11_lowerbound_probe,
)
from .boundary import CircleMapTrace, OwnTrace, PolygonArcLength, Reparametrized
from .conformal import (
    boundary_trace,
    disk_to_square_map,
    evaluate_map,
    hyperbolic_geodesic_disk,
    identity_map,
    preimage,
    solve_schwarz_christoffel,
)
from .counterexample import (
    base_sequences,
    build_counterexample_plan,
    grouping_indices,
    segment_plan,
    verify_counterexample,
)
from .crosscuts import build_dyadic_cycles, crosscut, crosscut_sum
from .domains import load_domain
from .extension import build_extension
from .geometry import GridDistanceOracle, build_polygon_domain, internal_diameter, internal_distance
from .integrability import phi_hyperbolic_area_integral
from .layout import TubeDistanceOracle, fold_layout, unfolded_chain
from .metrics import hyperbolic_distance, hyperbolic_distance_disk, quasi_hyperbolic_distance
from .phi import classify_tail_integral, estimate_subadditivity_M, phi_alpha, phi_eval, phi_table
from .series import classify_weighted_series, series_probe

__all__ = [
    "load_domain", "build_polygon_domain", "internal_distance", "internal_diameter", "GridDistanceOracle",
    "identity_map", "disk_to_square_map", "solve_schwarz_christoffel", "evaluate_map", "boundary_trace",
    "preimage", "hyperbolic_geodesic_disk",
    "hyperbolic_distance_disk", "hyperbolic_distance", "quasi_hyperbolic_distance",
    "phi_alpha", "phi_table", "phi_eval", "estimate_subadditivity_M", "classify_tail_integral",
    "phi_hyperbolic_area_integral",
    "OwnTrace", "CircleMapTrace", "PolygonArcLength", "Reparametrized",
    "build_dyadic_cycles", "crosscut", "crosscut_sum", "build_extension",
    "base_sequences", "grouping_indices", "segment_plan", "build_counterexample_plan", "verify_counterexample",
    "fold_layout", "unfolded_chain", "TubeDistanceOracle",
    "bad_parametrization", "identity_plan", "parametrization_from_plan", "sample_disk_map",
    "w11_lowerbound_probe",
    "series_probe", "classify_weighted_series",
]
