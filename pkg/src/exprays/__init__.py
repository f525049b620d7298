"""Combinatorics and numerics of external rays for the family exp(z) + c.

The package is organized around one combinatorial spine and one
numerical spine.  Addresses, sector itineraries, orbit portraits, and
characteristic pairs live on the first; ray tracing, Newton solvers for
distinguished parameters, and separation certificates live on the
second.  The two meet in :func:`approximate_misiurewicz`, which turns a
preperiodic landing class into certified periodic ray pairs, and in
:func:`verify_fiber_separation`, which turns those pairs into closed
curves in parameter space.
"""

from .addresses import (
    EXPONENTIAL,
    Alphabet,
    ExternalAddress,
    compare,
    cyclic_between,
    dist,
    embed,
    minimal_potential,
    parse_address,
    project,
    shift,
)
from .approximation import (
    ApproximationResult,
    MisiurewiczCombinatorics,
    approximate_misiurewicz,
    classify_misiurewicz,
)
from .errors import (
    AlphabetMismatch,
    AttractingContradiction,
    BoundaryHit,
    BoundaryOrbit,
    BranchCut,
    DegreeTooSmall,
    Divergence,
    ExpraysError,
    InvalidAddress,
    InvalidBase,
    NewtonDivergence,
    NotPeriodic,
    NotSimple,
    PeriodMismatch,
    PortraitInvariant,
    PostsingularCollision,
    PreconditionError,
    ResourceBound,
    SearchExhausted,
    SeedDisagreement,
    WrongBasin,
)
from .itineraries import Itinerary, itinerary, same_landing_class, sector_index
from .portraits import (
    CharacteristicPair,
    OrbitPortrait,
    is_characteristic_pair,
    periodic_addresses,
    portrait_classes,
)
from .rays import (
    RayTrace,
    landing_point,
    point_on_dynamic_ray,
    point_on_dynamic_ray_mp,
    point_on_parameter_ray,
    point_on_parameter_ray_mp,
    trace_dynamic_ray,
    trace_parameter_ray,
    verify_landing,
)
from .render import RenderJob, Window, escape_counts, render, shade
from .separation import (
    SeparatingCurve,
    SeparationCertificate,
    build_curve,
    side_of,
    verify_fiber_separation,
)
from .solvers import (
    MisiurewiczParameter,
    ParabolicRoot,
    PeriodicPoint,
    find_misiurewicz_parameter,
    find_parabolic_root,
    find_periodic_point,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AlphabetMismatch",
    "ApproximationResult",
    "AttractingContradiction",
    "BoundaryHit",
    "BoundaryOrbit",
    "BranchCut",
    "CharacteristicPair",
    "DegreeTooSmall",
    "Divergence",
    "EXPONENTIAL",
    "ExpraysError",
    "ExternalAddress",
    "InvalidAddress",
    "InvalidBase",
    "Itinerary",
    "MisiurewiczCombinatorics",
    "MisiurewiczParameter",
    "NewtonDivergence",
    "NotPeriodic",
    "NotSimple",
    "OrbitPortrait",
    "ParabolicRoot",
    "PeriodMismatch",
    "PeriodicPoint",
    "PortraitInvariant",
    "PostsingularCollision",
    "PreconditionError",
    "RayTrace",
    "RenderJob",
    "ResourceBound",
    "SearchExhausted",
    "SeedDisagreement",
    "SeparatingCurve",
    "SeparationCertificate",
    "Window",
    "WrongBasin",
    "approximate_misiurewicz",
    "build_curve",
    "classify_misiurewicz",
    "compare",
    "cyclic_between",
    "dist",
    "embed",
    "escape_counts",
    "find_misiurewicz_parameter",
    "find_parabolic_root",
    "find_periodic_point",
    "is_characteristic_pair",
    "itinerary",
    "landing_point",
    "minimal_potential",
    "parse_address",
    "periodic_addresses",
    "point_on_dynamic_ray",
    "point_on_dynamic_ray_mp",
    "point_on_parameter_ray",
    "point_on_parameter_ray_mp",
    "portrait_classes",
    "project",
    "render",
    "same_landing_class",
    "sector_index",
    "shade",
    "shift",
    "side_of",
    "trace_dynamic_ray",
    "trace_parameter_ray",
    "verify_fiber_separation",
    "verify_landing",
]
