"""Shortest paths: funnel geodesics in simple polygons and in discretized
domains whose curved boundary pieces are flattened and then snapped back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from shapely.geometry import Point as ShpPoint, Polygon as ShpPolygon
from shapely.geometry.polygon import orient as shp_orient

from .errors import (
    Degenerate,
    DegenerateEndpoints,
    DisconnectedEndpoints,
    EndpointMismatch,
    PointInDeadRegion,
    PointOutside,
    RegionDegenerate,
)
from .geom import (
    Point,
    SimplePolygon,
    on_segment,
    orient,
    point_segment_distance,
    segment_clips_polygon,
    segment_intersection,
    segments_cross,
    unit_vector,
)
from .paths import Arc, PiecewisePath, Segment, Traced, polyline_path

# --- triangulation (ear clipping) ---


def _in_triangle_closed(a: Point, b: Point, c: Point, p: Point) -> bool:
    return orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0


def triangulate(points: Sequence[Point]) -> list:
    """Ear-clip a CCW simple polygon given as a vertex list; returns index triples."""
    n = len(points)
    if n < 3:
        raise Degenerate("cannot triangulate fewer than 3 vertices")
    idx = list(range(n))
    tris = []
    while len(idx) > 3:
        m = len(idx)
        clipped = False
        # Prefer strictly convex ears; fall back to dropping collinear vertices.
        for k in range(m):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % m]
            a, b, c = points[i0], points[i1], points[i2]
            o = orient(a, b, c)
            if o < 0:
                continue
            if o == 0:
                if on_segment(b, a, c):
                    idx.pop(k)
                    clipped = True
                    break
                continue
            ok = True
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                if _in_triangle_closed(a, b, c, points[j]):
                    ok = False
                    break
            if ok:
                tris.append((i0, i1, i2))
                idx.pop(k)
                clipped = True
                break
        if not clipped:
            raise Degenerate("ear clipping found no ear; polygon may be non-simple")
    a, b, c = idx
    if orient(points[a], points[b], points[c]) > 0:
        tris.append((a, b, c))
    return tris


def _triangle_adjacency(tris: list) -> dict:
    edge_map = {}
    for ti, (a, b, c) in enumerate(tris):
        for u, v in ((a, b), (b, c), (c, a)):
            edge_map.setdefault((min(u, v), max(u, v)), []).append(ti)
    adj = {ti: [] for ti in range(len(tris))}
    for edge, owners in edge_map.items():
        if len(owners) == 2:
            t0, t1 = owners
            adj[t0].append((t1, edge))
            adj[t1].append((t0, edge))
    return adj


def _locate_triangle(points: list, tris: list, p: Point) -> Optional[int]:
    for ti, (a, b, c) in enumerate(tris):
        if _in_triangle_closed(points[a], points[b], points[c], p):
            return ti
    return None


def _corridor(tris: list, adj: dict, t_from: int, t_to: int) -> Optional[list]:
    """Triangle path from t_from to t_to as (triangle, entry_edge) pairs."""
    from collections import deque

    prev = {t_from: None}
    q = deque([t_from])
    while q:
        cur = q.popleft()
        if cur == t_to:
            break
        for nxt, edge in adj[cur]:
            if nxt not in prev:
                prev[nxt] = (cur, edge)
                q.append(nxt)
    if t_to not in prev:
        return None
    chain = []
    cur = t_to
    while prev[cur] is not None:
        parent, edge = prev[cur]
        chain.append((cur, edge))
        cur = parent
    chain.reverse()
    return chain


def _portals_for_corridor(points: list, tris: list, chain: list) -> list:
    """(left, right) portal points when walking the corridor."""
    portals = []
    for tri_idx, (u, v) in chain:
        third = [w for w in tris[tri_idx] if w not in (u, v)][0]
        if orient(points[u], points[v], points[third]) > 0:
            left, right = points[u], points[v]
        else:
            left, right = points[v], points[u]
        portals.append((left, right))
    return portals


def _triarea2(a: Point, b: Point, c: Point) -> float:
    return (b - a).cross(c - a)


def _funnel(portals: list, start: Point, goal: Point) -> list:
    """Simple funnel over (left, right) portals; returns the taut polyline."""
    ports = [(start, start)] + portals + [(goal, goal)]
    pts = [start]
    apex = left = right = start
    apex_i = left_i = right_i = 0
    i = 1
    while i < len(ports):
        pl, pr = ports[i]
        # Tighten the right side: candidate must be CCW-or-equal of the
        # current right ray, and must not cross over the left ray.
        if _triarea2(apex, right, pr) >= 0.0:
            if (
                apex.dist(right) == 0.0
                or _triarea2(apex, left, pr) < 0.0
                or on_segment(pr, left, apex)
            ):
                right, right_i = pr, i
            else:
                pts.append(left)
                apex, apex_i = left, left_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        # Tighten the left side, symmetrically.
        if _triarea2(apex, left, pl) <= 0.0:
            if (
                apex.dist(left) == 0.0
                or _triarea2(apex, right, pl) > 0.0
                or on_segment(pl, right, apex)
            ):
                left, left_i = pl, i
            else:
                pts.append(right)
                apex, apex_i = right, right_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        i += 1
    pts.append(goal)
    return pts


def _clean_polyline(points: list) -> list:
    out = []
    for p in points:
        if out and p.dist(out[-1]) == 0.0:
            continue
        out.append(p)
    changed = True
    while changed:
        changed = False
        for k in range(1, len(out) - 1):
            if orient(out[k - 1], out[k], out[k + 1]) == 0 and on_segment(out[k], out[k - 1], out[k + 1]):
                out.pop(k)
                changed = True
                break
    return out


def _funnel_path(points: list, start: Point, goal: Point) -> PiecewisePath:
    tris = triangulate(points)
    adj = _triangle_adjacency(tris)
    t_s = _locate_triangle(points, tris, start)
    t_t = _locate_triangle(points, tris, goal)
    if t_s is None or t_t is None:
        raise PointOutside("endpoint not inside the triangulated region")
    if t_s == t_t:
        return polyline_path([start, goal])
    chain = _corridor(tris, adj, t_s, t_t)
    if chain is None:
        raise DisconnectedEndpoints("no triangle corridor between endpoints")
    portals = _portals_for_corridor(points, tris, chain)
    pts = _clean_polyline(_funnel(portals, start, goal))
    return polyline_path(pts)


def shortest_path_simple(poly: SimplePolygon, s: Point, t: Point) -> PiecewisePath:
    """Geodesic between two points of a simple polygon (funnel algorithm)."""
    for p in (s, t):
        if poly.contains(p) == "outside":
            raise PointOutside(f"point {p.as_tuple()} outside polygon")
    if s.dist(t) == 0.0:
        raise DegenerateEndpoints("geodesic endpoints coincide")
    if not segment_clips_polygon(s, t, poly):
        return polyline_path([s, t])
    return _funnel_path(list(poly.vertices), s, t)


# --- discretized domains (polygon minus dead regions) ---


@dataclass
class DomainLoop:
    points: list  # CCW ring, not closed
    tags: list  # per edge k: ("poly", edge_index) or ("piece", key)


@dataclass
class DiscretizedDomain:
    """Flattened free space with per-edge provenance tags."""

    loops: list
    delta: float
    source_polygon: SimplePolygon
    pieces: dict = field(default_factory=dict)  # key -> original CurvePiece
    regions: list = field(default_factory=list)  # source dead regions, if any
    _shapely: list = field(default_factory=list, repr=False)

    def component_polygons(self) -> list:
        if not self._shapely:
            self._shapely = [ShpPolygon([p.as_tuple() for p in lp.points]) for lp in self.loops]
        return self._shapely

    def component_of(self, p: Point) -> Optional[int]:
        probe = ShpPoint(p.as_tuple())
        slack = 1e-9 * max(self.source_polygon.diameter, 1.0)
        for i, comp in enumerate(self.component_polygons()):
            if comp.distance(probe) <= slack:
                return i
        return None


def piece_point_distance(p: Point, piece) -> float:
    if isinstance(piece, Segment):
        return point_segment_distance(p, piece.a, piece.b)
    if isinstance(piece, Arc):
        v = p - piece.center
        r = v.norm()
        if r == 0.0:
            return piece.radius
        theta = v.angle()
        rel = math.remainder(theta - piece.start_angle, 2.0 * math.pi)
        sw = piece.sweep
        inside = (0.0 <= rel <= sw) if sw >= 0 else (sw <= rel <= 0.0)
        if not inside:
            rel2 = rel - math.copysign(2.0 * math.pi, rel)
            inside = (0.0 <= rel2 <= sw) if sw >= 0 else (sw <= rel2 <= 0.0)
        if inside:
            return abs(r - piece.radius)
        return min(p.dist(piece.start), p.dist(piece.end))
    if isinstance(piece, Traced):
        pts = [q for _, q, _ in piece.samples]
        return min(point_segment_distance(p, a, b) for a, b in zip(pts, pts[1:]))
    raise TypeError(f"unknown piece {piece!r}")


def _arc_angle_of_point(arc: Arc, p: Point) -> float:
    return (p - arc.center).angle()


def _sweep_between(arc: Arc, a0: float, a1: float, hint_sign: float) -> float:
    """Signed sweep from a0 to a1 compatible with the travel direction hint."""
    d = math.remainder(a1 - a0, 2.0 * math.pi)
    if hint_sign > 0 and d < 0:
        d += 2.0 * math.pi
    if hint_sign < 0 and d > 0:
        d -= 2.0 * math.pi
    return d


def _tangent_angles(p: Point, arc: Arc) -> list:
    """Angles on the circle where the tangent line passes through p."""
    v = p - arc.center
    d = v.norm()
    if d <= arc.radius:
        return []
    off = math.acos(arc.radius / d)
    base = v.angle()
    return [base + off, base - off]


def _snap_runs(
    flat_points: list,
    tags_of_vertex: list,
    domain: DiscretizedDomain,
    snap_radius: float,
) -> PiecewisePath:
    """Re-label maximal flattened-curve runs as true curve pieces."""
    join_eps = 1e-9 * max(domain.source_polygon.diameter, 1.0)
    n = len(flat_points)
    runs = []  # (start_idx, end_idx inclusive, piece_key)
    k = 1
    while k < n - 1:
        tag = tags_of_vertex[k]
        if tag is None:
            k += 1
            continue
        j = k
        while j + 1 < n - 1 and tags_of_vertex[j + 1] == tag:
            j += 1
        runs.append((k, j, tag))
        k = j + 1

    pieces = []
    cursor = flat_points[0]
    for start, end, key in runs:
        src = domain.pieces[key]
        after = flat_points[end + 1]
        if isinstance(src, Arc):
            a_first = _arc_angle_of_point(src, flat_points[start])
            a_last = _arc_angle_of_point(src, flat_points[end])
            hint = _sweep_between(src, a_first, a_last, 0.0) if start != end else 0.0
            hint_sign = (
                math.copysign(1.0, hint) if hint != 0.0 else math.copysign(1.0, src.sweep)
            )
            entry = _refine_contact(cursor, src, flat_points[start], snap_radius)
            exit_ = _refine_contact(after, src, flat_points[end], snap_radius)
            a_in = _arc_angle_of_point(src, entry)
            a_out = _arc_angle_of_point(src, exit_)
            sweep = _sweep_between(src, a_in, a_out, hint_sign)
            if cursor.dist(entry) > join_eps:
                pieces.append(Segment(cursor, entry))
            if abs(sweep) > 1e-12:
                pieces.append(Arc(src.center, src.radius, a_in, sweep))
                cursor = pieces[-1].end
            else:
                cursor = entry
        else:
            run_pts = flat_points[start : end + 1]
            if cursor.dist(run_pts[0]) > join_eps:
                pieces.append(Segment(cursor, run_pts[0]))
                cursor = run_pts[0]
            sub = _traced_slice(src, run_pts)
            if sub is not None:
                pieces.append(sub)
                cursor = sub.end
            else:
                for a, b in zip(run_pts, run_pts[1:]):
                    if a.dist(b) > 0.0:
                        pieces.append(Segment(a, b))
                        cursor = b
    if cursor.dist(flat_points[-1]) > join_eps:
        pieces.append(Segment(cursor, flat_points[-1]))
    return PiecewisePath(pieces)


def _refine_contact(anchor: Point, arc: Arc, fallback: Point, snap_radius: float) -> Point:
    """True contact point of the taut path around `arc` coming from `anchor`.

    Either a tangency from the anchor or an arc endpoint, whichever is
    consistent and closest to the flattened contact point.
    """
    best = fallback
    best_d = snap_radius
    for endpoint in (arc.start, arc.end):
        d = endpoint.dist(fallback)
        if d < best_d:
            best, best_d = endpoint, d
    for ang in _tangent_angles(anchor, arc):
        cand = arc.center + unit_vector(ang) * arc.radius
        d = cand.dist(fallback)
        if d < best_d:
            # A tangency this close to an arc endpoint is the endpoint; the
            # tangency computation is ill-conditioned for anchors near the
            # circle.
            for endpoint in (arc.start, arc.end):
                if cand.dist(endpoint) < 1e-6 * arc.radius:
                    cand = endpoint
                    break
            best, best_d = cand, d
    return best


def _traced_slice(src: Traced, run_pts: list) -> Optional[Traced]:
    """Sub-piece of a traced curve spanning the flattened run, if resolvable."""
    samples = src.samples
    pts = [p for _, p, _ in samples]

    def nearest(q: Point) -> int:
        return min(range(len(pts)), key=lambda i: q.dist(pts[i]))

    i0 = nearest(run_pts[0])
    i1 = nearest(run_pts[-1])
    if i0 == i1:
        return None
    if i0 > i1:
        lo, hi = i1, i0
        reversed_ = True
    else:
        lo, hi = i0, i1
        reversed_ = False
    part = samples[lo : hi + 1]
    base = part[0][0]
    sub = Traced(tuple((s - base, p, t) for s, p, t in part), src.tolerance, src.generator)
    return sub.reversed() if reversed_ else sub


def shortest_path_domain(
    domain: DiscretizedDomain, s: Point, t: Point, route_delta: float = None
) -> PiecewisePath:
    """Geodesic in the flattened domain with curve runs snapped back.

    Routing runs on a coarser flattening when the domain was discretized very
    finely; the curve runs are snapped onto the exact source pieces via
    tangency afterwards, so the output does not inherit the routing error.
    """
    ci = domain.component_of(s)
    cj = domain.component_of(t)
    if ci is None or cj is None:
        missing = s if ci is None else t
        if domain.source_polygon.contains(missing) != "outside":
            raise PointInDeadRegion(f"point {missing.as_tuple()} lies in a dead region")
        raise PointOutside(f"point {missing.as_tuple()} outside polygon")
    if ci != cj:
        raise DisconnectedEndpoints("endpoints lie in different free components")
    if s.dist(t) == 0.0:
        raise DegenerateEndpoints("geodesic endpoints coincide")

    diam = domain.source_polygon.diameter
    if route_delta is None:
        route_delta = max(domain.delta, 5e-4 * diam)
    route_domain = domain
    if route_delta > 1.5 * domain.delta and domain.regions:
        from .deadregion import subtract_regions

        route_domain = subtract_regions(domain.source_polygon, domain.regions, route_delta)
        rci = route_domain.component_of(s)
        rcj = route_domain.component_of(t)
        if rci is None or rcj is None or rci != rcj:
            route_domain = domain  # coarse flattening merged/cut a passage
            rci = ci
        loop = route_domain.loops[rci if route_domain is not domain else ci]
    else:
        loop = route_domain.loops[ci]

    pts = loop.points
    flat = _funnel_path(pts, s, t)
    flat_points = [flat.pieces[0].start] + [p.end for p in flat.pieces]

    index_of = {p.as_tuple(): i for i, p in enumerate(pts)}
    tags = []
    for q in flat_points:
        i = index_of.get(q.as_tuple())
        if i is None:
            tags.append(None)
            continue
        n = len(pts)
        t_prev = loop.tags[(i - 1) % n]
        t_next = loop.tags[i]
        if (
            t_prev is not None
            and t_prev == t_next
            and isinstance(t_prev, tuple)
            and t_prev[0] == "piece"
        ):
            tags.append(t_prev[1])
        else:
            tags.append(None)
    max_radius = max(
        (p.radius for p in route_domain.pieces.values() if isinstance(p, Arc)),
        default=diam,
    )
    chord_step = math.sqrt(8.0 * max_radius * route_domain.delta) + route_domain.delta
    return _snap_runs(flat_points, tags, route_domain, snap_radius=2.0 * chord_step)


# --- geodesic between two paths (hourglass) ---


def _polyline_crossings(A: list, B: list, scale: float) -> list:
    """Interior meeting points of two polylines as (paramA, paramB, point)."""
    eps = 1e-12 * scale
    out = []
    for i in range(len(A) - 1):
        for j in range(len(B) - 1):
            a, b = A[i], A[i + 1]
            c, d = B[j], B[j + 1]
            if segments_cross(a, b, c, d):
                q = segment_intersection(a, b, c, d)
                if q is None:
                    continue
                ta = i + (q - a).norm() / max(a.dist(b), eps)
                tb = j + (q - c).norm() / max(c.dist(d), eps)
                out.append((ta, tb, q))
    out.sort(key=lambda r: r[0])
    # Drop near-duplicates.
    dedup = []
    for r in out:
        if dedup and abs(r[0] - dedup[-1][0]) < 1e-9 and r[2].dist(dedup[-1][2]) < eps * 10:
            continue
        dedup.append(r)
    return dedup


def _slice_polyline(P: list, t0: float, t1: float, p0: Point, p1: Point) -> list:
    i0 = int(math.floor(t0))
    i1 = int(math.floor(min(t1, len(P) - 1 - 1e-12)))
    pts = [p0] + P[i0 + 1 : i1 + 1] + [p1]
    out = []
    for p in pts:
        if out and p.dist(out[-1]) == 0.0:
            continue
        out.append(p)
    return out


def _lobe_geodesic(A: list, B: list, scale: float) -> list:
    """Geodesic from A[0] to A[-1] inside the region bounded by chains A and B."""
    ring = A + list(reversed(B))[1:-1]
    ring = [p for k, p in enumerate(ring) if k == 0 or p.dist(ring[k - 1]) > 1e-12 * scale]
    if len(ring) < 3:
        return list(A)
    area2 = sum(a.cross(b) for a, b in zip(ring, ring[1:] + ring[:1]))
    if abs(area2) < 1e-14 * scale * scale:
        return list(A)
    if area2 < 0:
        ring = [ring[0]] + list(reversed(ring[1:]))
    try:
        path = _funnel_path(ring, ring[0], A[-1] if A[-1] in ring else ring[len(A) - 1])
    except Degenerate as exc:
        raise RegionDegenerate(f"hourglass region unusable: {exc}") from exc
    return [path.pieces[0].start] + [p.end for p in path.pieces]


def geodesic_in_hourglass(p1: PiecewisePath, p2: PiecewisePath, delta: float) -> PiecewisePath:
    """Geodesic in the closed region bounded by two paths with shared endpoints."""
    scale = max(p1.total_length, p2.total_length, 1.0)
    if p1.start.dist(p2.start) > 1e-6 * scale or p1.end.dist(p2.end) > 1e-6 * scale:
        raise EndpointMismatch("hourglass paths must share both endpoints")
    # Routing resolution: fine enough for tolerance work, coarse enough to keep
    # triangulation tractable.
    route_delta = max(delta, 5e-5 * scale)
    A = p1.flatten(route_delta)
    B = p2.flatten(route_delta)
    dev = max(
        (min(point_segment_distance(p, u, v) for u, v in zip(B, B[1:])) for p in A),
        default=0.0,
    )
    if dev < 1e-12 * scale:
        return p1
    crossings = _polyline_crossings(A, B, scale)
    cuts = [(0.0, 0.0, A[0])] + crossings + [(len(A) - 1.0, len(B) - 1.0, A[-1])]
    out_pts = []
    for (ta0, tb0, q0), (ta1, tb1, q1) in zip(cuts, cuts[1:]):
        subA = _slice_polyline(A, ta0, ta1, q0, q1)
        subB = _slice_polyline(B, tb0, tb1, q0, q1)
        lobe = _lobe_geodesic(subA, subB, scale)
        if out_pts:
            lobe = lobe[1:]
        out_pts.extend(lobe)
    return polyline_path(_clean_polyline(out_pts))
