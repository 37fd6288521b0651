"""Exact Fréchet distance between polygonal curves by a retractable-leash sweep.

The sweep visits the cells of the distance terrain once, keeping per row and
per column a deque of candidate entry boundaries and an envelope of boundary
profiles.  Squared Euclidean and polyhedral metrics (L1, L-infinity, custom
facet sets) are exact; a regular-polygon metric gives a one-sided
``(1 + eps)`` approximation of the Euclidean value.
"""

from .engine import FrechetResult, frechet_distance, frechet_distance_approx, refine_with_decision
from .envelope import EmptyEnvelopeError, FacetListEnvelope, MinPoint, ParabolaEnvelope, make_envelope
from .geometry import (
    BoundaryProfile,
    Metric,
    MetricKind,
    Parabola,
    PiecewiseLinear,
    PolygonalCurve,
    boundary_profile,
    curve_eval,
    eval_metric,
    lift_to_polygon_metric,
    polygon_sides_for_epsilon,
)
from .oracle import decide, discrete_frechet, frechet_by_bisection

__version__ = "0.1.0"

__all__ = [
    "BoundaryProfile",
    "EmptyEnvelopeError",
    "FacetListEnvelope",
    "FrechetResult",
    "Metric",
    "MetricKind",
    "MinPoint",
    "Parabola",
    "ParabolaEnvelope",
    "PiecewiseLinear",
    "PolygonalCurve",
    "boundary_profile",
    "curve_eval",
    "decide",
    "discrete_frechet",
    "eval_metric",
    "frechet_by_bisection",
    "frechet_distance",
    "frechet_distance_approx",
    "lift_to_polygon_metric",
    "make_envelope",
    "polygon_sides_for_epsilon",
    "refine_with_decision",
]
