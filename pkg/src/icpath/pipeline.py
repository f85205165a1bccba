"""Top-level algorithm: build both dead regions, subtract, take the geodesic,
verify, and report the shortest increasing-chords path or why none exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .deadregion import (
    DeadRegion,
    build_dead_region,
    region_contains,
    region_from_json,
    subtract_regions,
)
from .errors import (
    DegenerateEndpoints,
    DisconnectedEndpoints,
    PointOutside,
    VerificationFailed,
)
from .geom import Point, SimplePolygon
from .geodesic import shortest_path_domain, shortest_path_simple
from .paths import PiecewisePath, path_from_json, path_to_json, polyline_path
from .verify import VerifyReport, full_suite, report_from_json

STATUS_PATH = "path"
STATUS_S_DEAD = "infeasible_s_dead"
STATUS_T_DEAD = "infeasible_t_dead"
STATUS_DISCONNECTED = "infeasible_disconnected"


@dataclass
class IcResult:
    status: str
    path: Optional[PiecewisePath]
    regions_s: list
    regions_t: list
    reports: list
    tol: float
    delta: float
    boundary_proximity: bool = False

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "path": path_to_json(self.path) if self.path is not None else None,
            "regions": {
                "s": [r.to_json() for r in self.regions_s],
                "t": [r.to_json() for r in self.regions_t],
            },
            "reports": [r.to_json() for r in self.reports],
            "tolerances": {"tol": self.tol, "delta": self.delta},
            "boundary_proximity": self.boundary_proximity,
        }


def result_from_json(obj: dict) -> IcResult:
    return IcResult(
        status=obj["status"],
        path=path_from_json(obj["path"]) if obj.get("path") else None,
        regions_s=[region_from_json(r) for r in obj["regions"]["s"]],
        regions_t=[region_from_json(r) for r in obj["regions"]["t"]],
        reports=[report_from_json(r) for r in obj.get("reports", [])],
        tol=obj["tolerances"]["tol"],
        delta=obj["tolerances"]["delta"],
        boundary_proximity=obj.get("boundary_proximity", False),
    )


def _classify_against(regions: list, p: Point) -> str:
    state = "outside"
    for reg in regions:
        c = region_contains(reg, p)
        if c == "inside":
            return "inside"
        if c == "boundary":
            state = "boundary"
    return state


def path_in_polygon(path: PiecewisePath, poly: SimplePolygon, samples: int = 512) -> bool:
    params = np.linspace(0.0, path.total_length, samples)
    pts = path.points_at(params)
    for x, y in pts:
        if poly.contains(Point(float(x), float(y))) == "outside":
            return False
    return True


def path_avoids_regions(
    path: PiecewisePath, regions: list, band: float, samples: int = 512
) -> bool:
    params = np.linspace(0.0, path.total_length, samples)
    pts = path.points_at(params)
    for x, y in pts:
        p = Point(float(x), float(y))
        for reg in regions:
            if region_contains(reg, p) == "inside":
                # Allow the tolerance band: grazing contact is legal.
                from .geodesic import piece_point_distance

                d = min(piece_point_distance(p, pc) for pc in reg.boundary_chain())
                if d > band:
                    return False
    return True


def feasibility(poly: SimplePolygon, s: Point, t: Point, tol: float = None):
    """Blocker classification without computing the final geodesic.

    Returns (status, regions_s, regions_t, boundary_flag).
    """
    if tol is None:
        tol = 1e-7 * poly.diameter
    for name, p in (("s", s), ("t", t)):
        if poly.contains(p) != "inside":
            raise PointOutside(f"{name} = {p.as_tuple()} must be strictly inside")
    if s.dist(t) <= tol:
        raise DegenerateEndpoints("s and t coincide")
    regions_t = build_dead_region(poly, t, tol)
    regions_s = build_dead_region(poly, s, tol)
    c_s = _classify_against(regions_t, s)
    if c_s != "outside":
        return STATUS_S_DEAD, regions_s, regions_t, c_s == "boundary"
    c_t = _classify_against(regions_s, t)
    if c_t != "outside":
        return STATUS_T_DEAD, regions_s, regions_t, c_t == "boundary"
    if regions_s or regions_t:
        domain = subtract_regions(poly, regions_s + regions_t, delta=tol)
        if domain.component_of(s) != domain.component_of(t):
            return STATUS_DISCONNECTED, regions_s, regions_t, False
    return STATUS_PATH, regions_s, regions_t, False


def shortest_increasing_chords_path(
    poly: SimplePolygon,
    s: Point,
    t: Point,
    tol: float = None,
    delta: float = None,
    verify_samples: int = 20000,
) -> IcResult:
    """Shortest path with increasing chords, or a certified infeasibility."""
    if tol is None:
        tol = 1e-7 * poly.diameter
    if delta is None:
        delta = tol
    status, regions_s, regions_t, near_boundary = feasibility(poly, s, t, tol)
    if status != STATUS_PATH:
        return IcResult(
            status=status,
            path=None,
            regions_s=regions_s,
            regions_t=regions_t,
            reports=[],
            tol=tol,
            delta=delta,
            boundary_proximity=near_boundary,
        )
    regions = regions_s + regions_t
    if regions:
        domain = subtract_regions(poly, regions, delta=delta)
        path = shortest_path_domain(domain, s, t)
    else:
        path = shortest_path_simple(poly, s, t)
    if not path_in_polygon(path, poly):
        raise VerificationFailed("constructed path leaves the polygon", [])
    if regions and not path_avoids_regions(path, regions, band=4.0 * max(tol, delta)):
        raise VerificationFailed("constructed path enters a dead region", [])
    reports = full_suite(path, n=verify_samples, tol=tol)
    if not all(r.passed for r in reports):
        raise VerificationFailed(
            "constructed path failed verification: "
            + ", ".join(r.property for r in reports if not r.passed),
            reports,
        )
    return IcResult(
        status=STATUS_PATH,
        path=path,
        regions_s=regions_s,
        regions_t=regions_t,
        reports=reports,
        tol=tol,
        delta=delta,
    )
