"""Construction-free cross-checks: randomized path search certified by the
verifier, local shortening for optimality evidence, and a closed-form
membership rule for single-reflex polygons.

These deliberately avoid the dead-region construction code; their only shared
dependency is the verifier that certifies every candidate.  Candidates are
built from exact segments and circular arcs: flattened stand-ins cannot pass
the verifier at tight tolerances because an inscribed chord of a
constant-distance swing spends half its length moving away from the anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotSingleReflexInstance
from .geom import Point, SimplePolygon, segment_clips_polygon, unit_vector
from .geodesic import shortest_path_simple
from .paths import Arc, PiecewisePath, Segment, polyline_path
from .verify import check_increasing_chords, check_self_approaching

_SMOOTH_FRACTIONS = (0.02, 0.06, 0.15, 0.3, 0.5)
_RADIUS_LADDER = (1.0, 1.0 + 1e-9, 1.0 + 1e-4, 1.001, 1.01, 1.05)


@dataclass(frozen=True)
class SearchBudget:
    max_candidates: int = 200
    max_refinements: int = 40
    seed: int = 0
    step: float = 0.0  # 0 means: derived from the polygon diameter

    def __post_init__(self):
        if self.max_candidates <= 0 or self.max_refinements <= 0:
            raise ValueError("budget fields must be positive")


def _path_inside(poly: SimplePolygon, path: PiecewisePath) -> bool:
    pts = path.flatten(2e-3 * poly.diameter)
    for p in pts:
        if poly.contains(p) == "outside":
            return False
    for a, b in zip(pts, pts[1:]):
        if a.dist(b) > 0.0 and segment_clips_polygon(a, b, poly):
            return False
    return True


def _passes(path: PiecewisePath, prop: str, n: int, tol: float) -> bool:
    if prop == "self_approaching":
        return check_self_approaching(path, "fwd", n=n, tol=tol).passed
    ic = check_increasing_chords(path, n=n, tol=tol)
    if not ic.passed:
        return False
    fwd = check_self_approaching(path, "fwd", n=n, tol=tol)
    bwd = check_self_approaching(path, "bwd", n=n, tol=tol)
    return fwd.passed and bwd.passed


def _arc_between(center: Point, radius: float, a: Point, b: Point, prefer_sign: float = 0.0) -> Optional[Arc]:
    """Arc on circle(center, radius) from a to b (both assumed on the circle)."""
    a0 = (a - center).angle()
    a1 = (b - center).angle()
    sweep = math.remainder(a1 - a0, 2.0 * math.pi)
    if prefer_sign > 0 and sweep < 0:
        sweep += 2.0 * math.pi
    if prefer_sign < 0 and sweep > 0:
        sweep -= 2.0 * math.pi
    if abs(sweep) < 1e-12 or abs(sweep) >= 2.0 * math.pi:
        return None
    return Arc(center, radius, a0, sweep)


def _round_bend_piece(a: Point, v: Point, b: Point, r: float):
    """Corner cut at v: (entry point, Arc, exit point), or None."""
    d1 = (a - v).unit()
    d2 = (b - v).unit()
    cosang = max(-1.0, min(1.0, d1.dot(d2)))
    half = 0.5 * math.acos(cosang)
    if half < 1e-9 or half > 0.5 * math.pi - 1e-9:
        return None
    setback = r / math.tan(half)
    if setback > 0.95 * min(a.dist(v), b.dist(v)):
        return None
    p1 = v + d1 * setback
    p2 = v + d2 * setback
    bis = (d1 + d2).unit()
    center = v + bis * (r / math.sin(half))
    arc = _arc_between(center, r, p1, p2)
    if arc is None:
        return None
    return p1, arc, p2


def _smoothed_geodesic_path(geo_pts: list, r: float) -> Optional[PiecewisePath]:
    if len(geo_pts) < 3:
        return polyline_path(geo_pts)
    pieces = []
    cursor = geo_pts[0]
    for i in range(1, len(geo_pts) - 1):
        cut = _round_bend_piece(geo_pts[i - 1], geo_pts[i], geo_pts[i + 1], r)
        if cut is None:
            return None
        p1, arc, p2 = cut
        if cursor.dist(p1) > 1e-12:
            pieces.append(Segment(cursor, p1))
        pieces.append(arc)
        cursor = p2
    if cursor.dist(geo_pts[-1]) > 1e-12:
        pieces.append(Segment(cursor, geo_pts[-1]))
    try:
        return PiecewisePath(pieces)
    except Exception:
        return None


def _swing_candidates(s: Point, anchor: Point, bend: Point) -> list:
    """Constant-distance swings around the anchor, an exact arc followed by a
    radial run; handles geodesic turns sharper than a quarter circle."""
    out = []
    d = s.dist(anchor)
    psi_s = (s - anchor).angle()
    psi_v = (bend - anchor).angle()
    da = math.remainder(psi_v - psi_s, 2.0 * math.pi)
    if abs(da) < 1e-9 or abs(da) > math.pi - 1e-6:
        return out
    for lift in _RADIUS_LADDER:
        R = d * lift
        arc = Arc(anchor, R, psi_s + (0.0 if lift == 1.0 else 0.0), da)
        pieces = []
        if lift != 1.0:
            # Step outward first so the arc still starts at s.
            start = anchor + unit_vector(psi_s) * R
            pieces.append(Segment(s, start))
        pieces.append(Arc(anchor, R, psi_s, da))
        landing = anchor + unit_vector(psi_s + da) * R
        pieces.append(Segment(landing, anchor))
        try:
            out.append(PiecewisePath(pieces))
        except Exception:
            continue
    return out


def _circle_intersections(c1: Point, r1: float, c2: Point, r2: float) -> list:
    d = c1.dist(c2)
    if d <= 1e-15 or d > r1 + r2 or d < abs(r1 - r2):
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    h2 = r1 * r1 - a * a
    if h2 < 0.0:
        return []
    h = math.sqrt(max(h2, 0.0))
    base = c1 + (c2 - c1) * (a / d)
    off = (c2 - c1).unit().perp() * h
    if h == 0.0:
        return [base]
    return [base + off, base - off]


def _two_arc_candidates(s: Point, t: Point, bend: Point) -> list:
    """Composites hugging circles around both endpoints, joined where the
    circles meet near the blocking vertex; the optimum for single-bend
    pockets has this shape."""
    out = []
    d = s.dist(t)
    base_rt = bend.dist(t)
    base_rs = bend.dist(s)
    for f1 in _RADIUS_LADDER[:4]:
        for f2 in _RADIUS_LADDER[:4]:
            R1 = base_rt * f1
            R2 = base_rs * f2
            if d <= R1 or d <= R2:
                continue
            joints = _circle_intersections(t, R1, s, R2)
            if not joints:
                continue
            joint = min(joints, key=lambda q: q.dist(bend))
            # Tangency from s onto circle(t, R1): two choices; pick the one
            # giving the shorter wrap towards the joint.
            psi_s = (s - t).angle()
            off1 = math.acos(max(-1.0, min(1.0, R1 / d)))
            psi_t = (t - s).angle()
            off2 = math.acos(max(-1.0, min(1.0, R2 / d)))
            for sgn1 in (1.0, -1.0):
                a_pt = t + unit_vector(psi_s + sgn1 * off1) * R1
                arc1 = _arc_between(t, R1, a_pt, joint)
                if arc1 is None or abs(arc1.sweep) > 0.45 * math.pi:
                    continue
                for sgn2 in (1.0, -1.0):
                    b_pt = s + unit_vector(psi_t + sgn2 * off2) * R2
                    arc2 = _arc_between(s, R2, joint, b_pt)
                    if arc2 is None or abs(arc2.sweep) > 0.45 * math.pi:
                        continue
                    pieces = []
                    if s.dist(a_pt) > 1e-12:
                        pieces.append(Segment(s, a_pt))
                    pieces.append(arc1)
                    pieces.append(arc2)
                    if b_pt.dist(t) > 1e-12:
                        pieces.append(Segment(b_pt, t))
                    try:
                        out.append(PiecewisePath(pieces))
                    except Exception:
                        continue
    return out


def _spline_candidates(rng, s, t, geo_pts, scale, count):
    """Jittered quadratic-spline smoothings of the geodesic, flattened.

    Useful for mildly bent instances where margins are slack; grazing-tight
    instances are covered by the exact-arc families.
    """
    out = []
    for _ in range(count):
        ctrl = [s]
        for p in geo_pts[1:-1]:
            ctrl.append(
                p
                + Point(
                    float(rng.normal(0.0, 0.03 * scale)),
                    float(rng.normal(0.0, 0.03 * scale)),
                )
            )
        ctrl.append(t)
        if len(ctrl) == 2:
            mid = Point(0.5 * (s.x + t.x), 0.5 * (s.y + t.y))
            ctrl = [
                s,
                mid
                + Point(
                    float(rng.normal(0.0, 0.05 * scale)),
                    float(rng.normal(0.0, 0.05 * scale)),
                ),
                t,
            ]
        pts = [_bezier_chain(ctrl, i / 64.0) for i in range(65)]
        cleaned = [p for k, p in enumerate(pts) if k == 0 or p.dist(pts[k - 1]) > 1e-12]
        if len(cleaned) >= 2:
            try:
                out.append(polyline_path(cleaned))
            except Exception:
                pass
    return out


def _bezier_chain(ctrl: list, u: float) -> Point:
    pts = list(ctrl)
    while len(pts) > 1:
        pts = [a + (b - a) * u for a, b in zip(pts, pts[1:])]
    return pts[0]


def falsification_search(
    poly: SimplePolygon,
    s: Point,
    t: Point,
    budget: SearchBudget = None,
    prop: str = "increasing_chords",
    n_verify: int = 2000,
    tol: float = None,
    collect: bool = False,
    max_length: float = None,
):
    """First candidate path that the verifier certifies, or None.

    Candidate families: the straight segment, the geodesic, arc-smoothed
    geodesics over a radius ladder, constant-distance swings around the
    destination, two-circle composites around both endpoints, and jittered
    flattened splines.  Deterministic for a fixed seed.  With `collect`,
    every verified candidate is returned; with `max_length`, longer
    candidates are discarded before verification.
    """
    if budget is None:
        budget = SearchBudget()
    if tol is None:
        tol = 1e-7 * poly.diameter
    rng = np.random.default_rng(budget.seed)
    scale = poly.diameter
    found = []

    candidates = []
    try:
        candidates.append(polyline_path([s, t]))
    except Exception:
        pass
    try:
        geo = shortest_path_simple(poly, s, t)
        geo_pts = [geo.pieces[0].start] + [p.end for p in geo.pieces]
    except Exception:
        geo_pts = [s, t]
    if len(geo_pts) > 2:
        candidates.append(polyline_path(geo_pts))
        for frac in _SMOOTH_FRACTIONS:
            sm = _smoothed_geodesic_path(geo_pts, frac * scale * 0.2)
            if sm is not None:
                candidates.append(sm)
        candidates.extend(_swing_candidates(s, t, geo_pts[-2]))
        for cand in _swing_candidates(t, s, geo_pts[1]):
            candidates.append(cand.reverse())
        if prop != "self_approaching":
            candidates.extend(_two_arc_candidates(s, t, geo_pts[-2]))
    remaining = max(0, budget.max_candidates - len(candidates))
    candidates.extend(_spline_candidates(rng, s, t, geo_pts, scale, remaining))

    for path in candidates[: budget.max_candidates]:
        if max_length is not None and path.total_length > max_length:
            continue
        if not _path_inside(poly, path):
            continue
        if _passes(path, prop, n_verify, tol):
            if not collect:
                return path
            found.append(path)
    if collect:
        return found
    return None


def local_shortening(
    path: PiecewisePath,
    poly: SimplePolygon,
    regions: list = (),
    budget: SearchBudget = None,
    n_verify: int = 2000,
    tol: float = None,
) -> PiecewisePath:
    """Greedy chord shortcuts; accepts only verified, in-domain improvements."""
    from .deadregion import region_contains

    if budget is None:
        budget = SearchBudget()
    if tol is None:
        tol = 1e-7 * poly.diameter
    rng = np.random.default_rng(budget.seed + 1)
    best = path
    for _ in range(budget.max_refinements):
        L = best.total_length
        u = sorted(rng.uniform(0.0, L, size=2))
        if u[1] - u[0] < 1e-6 * L:
            continue
        a = best.point_at(u[0])
        b = best.point_at(u[1])
        chord = a.dist(b)
        arc = u[1] - u[0]
        if chord >= arc - 1e-12 * L:
            continue
        if segment_clips_polygon(a, b, poly):
            continue
        prefix = _subpath_pieces(best, 0.0, u[0])
        suffix = _subpath_pieces(best, u[1], L)
        try:
            cand = PiecewisePath(prefix + [Segment(a, b)] + suffix)
        except Exception:
            continue
        if cand.total_length >= best.total_length - 1e-12 * L:
            continue
        if not _path_inside(poly, cand):
            continue
        if regions:
            probes = cand.points_at(np.linspace(0.0, cand.total_length, 128))
            if any(
                any(region_contains(r, Point(float(x), float(y))) == "inside" for r in regions)
                for x, y in probes
            ):
                continue
        if _passes(cand, "increasing_chords", n_verify, tol):
            best = cand
    return best


def _subpath_pieces(path: PiecewisePath, a: float, b: float) -> list:
    """Polyline pieces approximating path[a..b] (used for shortcut splicing)."""
    if b - a <= 1e-12 * max(path.total_length, 1.0):
        return []
    k = max(2, int(96 * (b - a) / max(path.total_length, 1e-12)) + 2)
    params = np.linspace(a, b, k)
    pts = [Point(float(x), float(y)) for x, y in path.points_at(params)]
    return [Segment(p, q) for p, q in zip(pts, pts[1:]) if p.dist(q) > 0.0]


def single_reflex_membership(poly: SimplePolygon, anchor: Point, p: Point) -> str:
    """'dead' or 'alive' for polygons with exactly one reflex vertex.

    Alive when the anchor is visible or the geodesic bend stays within a
    quarter turn; otherwise the point must not be closer to the anchor than
    the blocking vertex, and the constant-distance swing onto the vertex ray
    must fit inside the polygon.
    """
    reflex = poly.reflex_indices()
    if len(reflex) != 1:
        raise NotSingleReflexInstance(f"{len(reflex)} reflex vertices")
    v = poly.vertices[reflex[0]]
    if not segment_clips_polygon(p, anchor, poly):
        return "alive"
    geo = shortest_path_simple(poly, p, anchor)
    pts = [geo.pieces[0].start] + [q.end for q in geo.pieces]
    if len(pts) != 3 or pts[1].dist(v) > 1e-9 * poly.diameter:
        raise NotSingleReflexInstance("geodesic does not bend exactly at the reflex vertex")
    u_in = (v - p).unit()
    u_out = (anchor - v).unit()
    if u_in.dot(u_out) >= 0.0:
        return "alive"
    R = v.dist(anchor)
    d = p.dist(anchor)
    if d < R:
        return "dead"
    # Swing at constant distance to the anchor until aligned with the vertex
    # ray, then run straight in: check the swing stays inside.
    psi_p = (p - anchor).angle()
    psi_v = (v - anchor).angle()
    da = math.remainder(psi_v - psi_p, 2.0 * math.pi)
    k = 64
    for i in range(1, k + 1):
        q = anchor + unit_vector(psi_p + da * i / k) * d
        if poly.contains(q) == "outside":
            return "dead"
    landing = anchor + unit_vector(psi_v) * d
    if segment_clips_polygon(landing, anchor, poly):
        return "dead"
    return "alive"
