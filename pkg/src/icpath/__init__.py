"""Shortest paths with increasing chords in simple polygons."""

from .geom import (
    HalfPlane,
    Point,
    SimplePolygon,
    orient,
    segment_clips_polygon,
    validate_polygon,
)
from .paths import (
    Arc,
    NormalFan,
    PiecewisePath,
    Segment,
    Traced,
    concat,
    half_planes,
    length,
    path_from_json,
    path_to_json,
    polyline_path,
    reverse,
)
from .verify import (
    VerifyReport,
    check_half_plane,
    check_increasing_chords,
    check_length_bound,
    check_normal_property_ic,
    check_self_approaching,
    full_suite,
    geodesic_between_check,
)
from .geodesic import (
    DiscretizedDomain,
    geodesic_in_hourglass,
    shortest_path_domain,
    shortest_path_simple,
    triangulate,
)
from .deadregion import (
    DeadRegion,
    TouchState,
    StopConditions,
    build_dead_region,
    region_contains,
    subtract_regions,
    trace_normal_touch_curve,
)
from .pipeline import (
    IcResult,
    feasibility,
    shortest_increasing_chords_path,
)
from .oracle import (
    SearchBudget,
    falsification_search,
    local_shortening,
    single_reflex_membership,
)
from .instances import Instance, dart, fixture_corpus, hook, instance_from_json, random_convex, random_pocket, square

__all__ = [
    "Arc",
    "DeadRegion",
    "DiscretizedDomain",
    "HalfPlane",
    "IcResult",
    "Instance",
    "NormalFan",
    "PiecewisePath",
    "Point",
    "SearchBudget",
    "Segment",
    "SimplePolygon",
    "StopConditions",
    "TouchState",
    "Traced",
    "VerifyReport",
    "build_dead_region",
    "check_half_plane",
    "check_increasing_chords",
    "check_length_bound",
    "check_normal_property_ic",
    "check_self_approaching",
    "concat",
    "dart",
    "falsification_search",
    "feasibility",
    "fixture_corpus",
    "full_suite",
    "geodesic_between_check",
    "geodesic_in_hourglass",
    "half_planes",
    "hook",
    "instance_from_json",
    "length",
    "local_shortening",
    "orient",
    "path_from_json",
    "path_to_json",
    "polyline_path",
    "random_convex",
    "random_pocket",
    "region_contains",
    "reverse",
    "segment_clips_polygon",
    "shortest_increasing_chords_path",
    "shortest_path_domain",
    "shortest_path_simple",
    "single_reflex_membership",
    "square",
    "subtract_regions",
    "trace_normal_touch_curve",
    "triangulate",
    "validate_polygon",
]
