"""Dead regions: the pocket points from which no distance-non-increasing path
to an anchor exists, bounded by normal-touch (taut-string) curves.

A path whose distance to every later point never grows must pass each "door"
pinched off by a blocking reflex vertex no closer to the anchor than the door
allows.  The critical boundary is traced by the tip of a taut string threaded
from the anchor through the geodesic structure: around a point support the
tip draws a circular arc, and when the contact unwinds onto a curved support
the tip draws that curve's involute.  Level 0 pieces (point support) are
exact arcs; level 1 (circular support) are closed-form circle involutes
sampled adaptively; deeper levels are traced numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from shapely.geometry import Point as ShpPoint, Polygon as ShpPolygon
from shapely.prepared import prep

from .errors import (
    AnchorOutside,
    EmptyDomain,
    StallDetected,
    StringExhausted,
    ToleranceUnachievable,
)
from .geom import (
    Point,
    SimplePolygon,
    ang_norm,
    ccw_delta,
    in_ccw_interval,
    point_segment_distance,
    segments_cross,
    unit_vector,
)
from .geodesic import (
    DiscretizedDomain,
    DomainLoop,
    piece_point_distance,
    shortest_path_domain,
    shortest_path_simple,
)
from .paths import Arc, PiecewisePath, Segment, Traced

_ANG_EPS = 1e-9
_MAX_LEVEL = 8
_MAX_PIECES = 64


# --- touch state & single-element tracing -----------------------------------


@dataclass
class TouchState:
    """Taut-string state against a convex supporting chain.

    `touched_chain` lists the supports ordered anchor-side first; entries are
    Points (pivots) or curve pieces, with straight gaps as Segment pieces.
    `unwind_param` is the arclength of the current contact measured from the
    chain's anchor-side end (point entries have zero extent) and
    `string_constant` the total string length.  The signed remainder
    string_constant - unwind_param may be negative: the tip then trails the
    contact along the backward tangent.
    """

    touched_chain: list
    unwind_param: float
    string_constant: float
    sweep: int = 1  # rotation sense of the free leg, +1 CCW
    march: int = 1  # direction the contact moves along the chain
    leg_angle: Optional[float] = None
    element_index: Optional[int] = None
    stop_reason: Optional[str] = None
    hit_point: Optional[Point] = None
    hit_edge: Optional[int] = None
    level: int = 0


@dataclass
class StopConditions:
    polygon: Optional[SimplePolygon] = None
    obstacles: Sequence = ()
    max_sweep: float = 2.0 * math.pi - 1e-2
    max_unwind: Optional[float] = None


def _chain_elements(chain: list) -> list:
    """(kind, payload, m0, m1) with cumulative arclength positions."""
    out = []
    m = 0.0
    for entry in chain:
        if isinstance(entry, Point):
            out.append(("point", entry, m, m))
        elif isinstance(entry, Segment):
            out.append(("gap", entry, m, m + entry.length))
            m += entry.length
        else:
            out.append(("curve", entry, m, m + entry.length))
            m += entry.length
    return out


def _locate_element(elements: list, m: float) -> int:
    total = elements[-1][3]
    eps = 1e-9 * (total + 1.0)
    for i, (kind, payload, m0, m1) in enumerate(elements):
        if kind == "point" and abs(m - m0) <= eps:
            return i
    for i, (kind, payload, m0, m1) in enumerate(elements):
        if kind != "point" and m0 - eps <= m <= m1 + eps:
            return i
    raise ValueError(f"unwind position {m} outside the touched chain")


def _delta_in_sweep(phi: float, target: float, sweep: int) -> float:
    return ccw_delta(phi, target) if sweep > 0 else ccw_delta(target, phi)


def _circle_edge_hits(q: Point, rho: float, a: Point, b: Point) -> list:
    d = b - a
    f = a - q
    A = d.dot(d)
    B = 2.0 * f.dot(d)
    C = f.dot(f) - rho * rho
    disc = B * B - 4.0 * A * C
    if disc < 0.0 or A == 0.0:
        return []
    sq = math.sqrt(disc)
    out = []
    for t in ((-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)):
        if -1e-12 <= t <= 1.0 + 1e-12:
            out.append(a + d * min(1.0, max(0.0, t)))
    return out


def _curve_travel_angle(piece, u: float, trailing: bool) -> float:
    t = piece.tangent_at(min(max(u, 0.0), piece.length))
    return ang_norm(t.angle() + (math.pi if trailing else 0.0))


def _curve_rotation_rate(piece, u: float) -> float:
    """d(tangent angle)/du at parameter u (signed)."""
    if isinstance(piece, Arc):
        return (1.0 if piece.sweep > 0 else -1.0) / piece.radius
    h = max(1e-6 * max(piece.length, 1.0), 1e-9)
    u0 = min(max(u - h, 0.0), piece.length)
    u1 = min(max(u + h, 0.0), piece.length)
    if u1 <= u0:
        return 0.0
    a0 = piece.tangent_at(u0).angle()
    a1 = piece.tangent_at(u1).angle()
    return math.remainder(a1 - a0, 2.0 * math.pi) / (u1 - u0)


def trace_normal_touch_curve(
    start: Point, state: TouchState, stop: StopConditions = None, tol: float = 1e-6
):
    """Grow the curve whose normal line keeps touching the supported chain.

    Handles the current chain element only: an exact Arc around a point
    support, or an adaptively sampled involute along a curved support.  The
    state advances in place; `state.stop_reason` records why tracing ended
    ('straighten' means the contact moved onto the neighbouring element).
    """
    if stop is None:
        stop = StopConditions()
    elements = _chain_elements(state.touched_chain)
    total = elements[-1][3]
    if not (-1e-9 <= state.unwind_param <= total + 1e-9):
        raise ValueError("unwind_param outside the touched chain")
    ei = state.element_index
    if ei is None:
        ei = _locate_element(elements, state.unwind_param)
    # Slide silently across straight gaps: the tip does not move there.
    while elements[ei][0] == "gap":
        kind, payload, m0, m1 = elements[ei]
        state.unwind_param = m0 if state.march < 0 else m1
        ni = ei + state.march
        if ni < 0 or ni >= len(elements):
            state.element_index = ei
            state.stop_reason = "chain_end"
            return None
        ei = ni
    state.element_index = ei
    if elements[ei][0] == "point":
        return _trace_point_support(start, state, stop, tol, elements, ei)
    return _trace_curve_support(start, state, stop, tol, elements, ei)


def _trace_point_support(start, state, stop, tol, elements, ei):
    _, q, m_q, _ = elements[ei]
    remainder = state.string_constant - state.unwind_param
    rho = abs(remainder)
    if rho <= 1e-12:
        raise StringExhausted("no free string left at a point support")
    trailing = remainder < 0
    if state.leg_angle is None:
        state.leg_angle = (start - q).angle()
    phi = state.leg_angle
    tip = q + unit_vector(phi) * rho
    if start.dist(tip) > max(1e-6, 100.0 * tol) * max(rho, 1.0):
        raise ValueError("start point does not sit on the current free leg")

    straighten = None
    ni = ei + state.march
    if 0 <= ni < len(elements):
        nkind, npayload, nm0, nm1 = elements[ni]
        if nkind == "gap":
            base_ang = npayload.direction().angle()
        elif nkind == "curve":
            u_side = npayload.length if state.march < 0 else 0.0
            base_ang = npayload.tangent_at(u_side).angle()
        else:
            base_ang = None
        if base_ang is not None:
            straighten = ang_norm(base_ang + (math.pi if trailing else 0.0))

    guard_angles = []
    if ei == 0 and state.march < 0 and len(elements) > 1:
        nkind, npayload, _, _ = elements[1]
        t0 = (
            npayload.direction().angle()
            if isinstance(npayload, Segment)
            else npayload.tangent_at(0.0).angle()
        )
        guard_angles = [ang_norm(t0), ang_norm(t0 + math.pi)]

    best = (stop.max_sweep, "max_sweep", None)
    if straighten is not None:
        d = _delta_in_sweep(phi, straighten, state.sweep)
        if d < _ANG_EPS or d > 2.0 * math.pi - _ANG_EPS:
            d = 0.0
        if d < best[0]:
            best = (d, "straighten", None)
    for g in guard_angles:
        d = _delta_in_sweep(phi, g, state.sweep)
        if _ANG_EPS < d < best[0]:
            best = (max(d - _ANG_EPS, 0.0), "touch_cross", None)
    skip_eps = max(100.0 * tol, 1e-9)
    if stop.polygon is not None:
        for edge_i, (ea, eb) in enumerate(stop.polygon.edges()):
            for hit in _circle_edge_hits(q, rho, ea, eb):
                if hit.dist(tip) <= skip_eps:
                    continue
                d = _delta_in_sweep(phi, (hit - q).angle(), state.sweep)
                if _ANG_EPS < d < best[0]:
                    best = (d, "wall", (edge_i, hit))
        for vi in stop.polygon.reflex_indices():
            u = stop.polygon.vertices[vi]
            du = u.dist(q)
            if 1e-12 < du < rho * (1.0 - 1e-12) and u.dist(tip) > skip_eps:
                d = _delta_in_sweep(phi, (u - q).angle(), state.sweep)
                if _ANG_EPS < d < best[0]:
                    best = (d, "wrap_vertex", u)
    for obs in stop.obstacles:
        if not isinstance(obs, Arc):
            continue
        cq = obs.center - q
        dist = cq.norm()
        if dist <= obs.radius or math.sqrt(dist * dist - obs.radius**2) >= rho:
            continue
        off = math.asin(min(1.0, obs.radius / dist))
        contact_d = math.sqrt(dist * dist - obs.radius**2)
        for ang in (cq.angle() + off, cq.angle() - off):
            contact = q + unit_vector(ang) * contact_d
            if piece_point_distance(contact, obs) > 1e-6 * max(rho, 1.0):
                continue
            d = _delta_in_sweep(phi, ang, state.sweep)
            if _ANG_EPS < d < best[0]:
                best = (d, "wrap_curve", (obs, contact))

    delta, kind, payload = best
    piece = None
    if delta > _ANG_EPS:
        piece = Arc(q, rho, phi, state.sweep * delta)
    state.leg_angle = ang_norm(phi + state.sweep * delta)
    state.stop_reason = kind
    if kind == "wall":
        state.hit_edge, state.hit_point = payload
    elif kind == "wrap_vertex":
        if state.march > 0:
            raise StallDetected("vertex wrap unsupported while winding forward")
        u = payload
        state.touched_chain.insert(ei + 1, Segment(q, u))
        state.touched_chain.insert(ei + 2, u)
        state.unwind_param = m_q + q.dist(u)
        state.element_index = ei + 2
    elif kind == "wrap_curve":
        state.hit_point = payload[1]
    elif kind == "straighten":
        state.element_index = ei + state.march
    return piece


def _segment_hits_polygon(poly: SimplePolygon, a: Point, b: Point) -> Optional[int]:
    if a.dist(b) == 0.0:
        return None
    for ei, (ea, eb) in enumerate(poly.edges()):
        if segments_cross(a, b, ea, eb):
            return ei
    return None


def _piece_level(piece) -> int:
    if isinstance(piece, Traced) and piece.generator:
        return int(piece.generator.get("level", 1))
    return 0


def _trace_curve_support(start, state, stop, tol, elements, ei):
    _, piece, m0, m1 = elements[ei]
    u = min(max(state.unwind_param - m0, 0.0), piece.length)
    remainder = state.string_constant - state.unwind_param
    trailing = remainder < 0 or (remainder == 0.0 and state.march > 0)
    rate = _curve_rotation_rate(piece, u)
    if rate != 0.0:
        sigma_inst = 1 if state.march * rate > 0 else -1
        if trailing:
            sigma_inst = sigma_inst
        if sigma_inst != state.sweep:
            raise StallDetected("string would reverse rotation on this support")

    def tip_at(uu: float) -> tuple:
        rem = state.string_constant - (m0 + uu)
        base = piece.point_at(uu)
        t = piece.tangent_at(uu)
        return base + t * rem, base

    samples = []
    contacts = []
    arclen = 0.0
    stop_reason = "chain_end"
    hit = None
    hit_edge = None
    swept = 0.0
    for _ in range(200000):
        rem = state.string_constant - (m0 + u)
        ell = abs(rem)
        dtheta = 0.15
        if ell > tol:
            dtheta = min(dtheta, math.sqrt(8.0 * tol / ell))
        local_rate = abs(_curve_rotation_rate(piece, u)) or 1.0 / max(piece.length, 1e-9)
        du = dtheta / local_rate
        if du < 1e-3 * tol:
            raise StallDetected("involute step collapsed")
        tip, base = tip_at(u)
        leg = _curve_travel_angle(piece, u, trailing)
        tangent = unit_vector(leg + state.sweep * 0.5 * math.pi)
        if not samples or tip.dist(samples[-1][1]) > 0.0:
            if samples:
                arclen += tip.dist(samples[-1][1])
            samples.append((arclen, tip, tangent))
            contacts.append((m0 + u, base))
        u_next = u + state.march * du
        done = False
        if state.march < 0 and u_next <= 0.0:
            u_next, done, stop_reason = 0.0, True, "straighten"
        if state.march > 0 and u_next >= piece.length:
            u_next, done, stop_reason = piece.length, True, "straighten"
        if stop.max_unwind is not None:
            target = stop.max_unwind - m0
            if (state.march > 0 and u_next >= target) or (
                state.march < 0 and u_next <= target
            ):
                u_next, done, stop_reason = target, True, "max_unwind"
        tip_next, _ = tip_at(u_next)
        if stop.polygon is not None:
            crossing = _segment_hits_polygon(stop.polygon, tip, tip_next)
            if crossing is not None:
                a, b = u, u_next
                for _ in range(80):
                    mid = 0.5 * (a + b)
                    tm, _ = tip_at(mid)
                    if _segment_hits_polygon(stop.polygon, tip, tm) is None:
                        a = mid
                    else:
                        b = mid
                u_next, done = b, True
                stop_reason = "wall"
                hit = tip_at(u_next)[0]
                hit_edge = crossing
        swept += abs(u_next - u) * local_rate
        u = u_next
        if done or swept > stop.max_sweep:
            if not done:
                stop_reason = "max_sweep"
            tip, base = tip_at(u)
            leg = _curve_travel_angle(piece, u, trailing)
            tangent = unit_vector(leg + state.sweep * 0.5 * math.pi)
            if samples and tip.dist(samples[-1][1]) > 0.0:
                arclen += tip.dist(samples[-1][1])
                samples.append((arclen, tip, tangent))
                contacts.append((m0 + u, base))
            break

    state.unwind_param = m0 + u
    state.leg_angle = _curve_travel_angle(piece, u, trailing)
    state.stop_reason = stop_reason
    state.hit_point = hit
    state.hit_edge = hit_edge
    if stop_reason == "straighten":
        ni = ei + state.march
        if ni < 0 or ni >= len(elements):
            state.stop_reason = "chain_end"
        else:
            state.element_index = ni
    if len(samples) < 2:
        return None
    level = 1 if isinstance(piece, Arc) else _piece_level(piece) + 1
    state.level = max(state.level, level)
    gen = {
        "kind": "normal_touch",
        "level": level,
        "string_constant": state.string_constant,
        "contacts": [[m, p.x, p.y] for m, p in contacts],
    }
    return Traced(tuple(samples), tol, gen)


# --- dead regions ------------------------------------------------------------


@dataclass
class DeadRegion:
    """Closed pocket bounded by normal-touch curves and a boundary interval."""

    anchor: Point
    pieces: tuple  # trace pieces from the seed vertex to the wall hit
    wall: tuple  # boundary segments closing the chain back to the seed vertex
    attachment: tuple  # (edge_index, t0, t1) intervals along the polygon boundary
    tolerance: float
    seed_index: int
    _shape: object = field(default=None, repr=False, compare=False)
    _prepared: object = field(default=None, repr=False, compare=False)

    def boundary_chain(self) -> list:
        return list(self.pieces) + list(self.wall)

    def flatten(self, delta: float) -> list:
        pts = []
        for piece in self.boundary_chain():
            chain = piece.flatten(delta)
            if pts:
                chain = chain[1:]
            pts.extend(chain)
        if pts and pts[0].dist(pts[-1]) < 1e-12:
            pts.pop()
        return pts

    def shape(self):
        if self._shape is None:
            pts = self.flatten(max(self.tolerance / 4.0, 1e-12))
            poly = ShpPolygon([p.as_tuple() for p in pts])
            if not poly.is_valid:
                poly = poly.buffer(0)
            self._shape = poly
            self._prepared = prep(poly)
        return self._shape

    def area(self) -> float:
        return float(self.shape().area)

    def to_json(self) -> dict:
        from .paths import piece_to_json

        return {
            "anchor": [self.anchor.x, self.anchor.y],
            "tolerance": self.tolerance,
            "seed_index": self.seed_index,
            "pieces": [piece_to_json(p) for p in self.pieces],
            "wall": [piece_to_json(p) for p in self.wall],
            "attachment": [list(iv) for iv in self.attachment],
        }


def region_from_json(obj: dict) -> DeadRegion:
    from .paths import piece_from_json

    return DeadRegion(
        anchor=Point(*obj["anchor"]),
        pieces=tuple(piece_from_json(p) for p in obj["pieces"]),
        wall=tuple(piece_from_json(p) for p in obj["wall"]),
        attachment=tuple(tuple(iv) for iv in obj["attachment"]),
        tolerance=obj["tolerance"],
        seed_index=obj["seed_index"],
    )


def region_contains(region: DeadRegion, p: Point) -> str:
    """'inside', 'boundary' (within the tolerance band) or 'outside'."""
    band = region.tolerance
    for piece in region.boundary_chain():
        if piece_point_distance(p, piece) <= band:
            return "boundary"
    region.shape()
    return "inside" if region._prepared.contains(ShpPoint(p.as_tuple())) else "outside"


def _seed_sweep(poly: SimplePolygon, vi: int, w_angle: float) -> Optional[int]:
    """Rotation sense of the free leg if reflex vertex vi blocks directions
    that would need more than a quarter turn towards the anchor, else None."""
    vs = poly.vertices
    n = len(vs)
    v = vs[vi]
    a_ang = ang_norm((vs[(vi - 1) % n] - v).angle())  # wall towards previous vertex
    b_ang = ang_norm((vs[(vi + 1) % n] - v).angle())  # wall towards next vertex
    d_ccw = ccw_delta(w_angle, a_ang)
    d_cw = ccw_delta(b_ang, w_angle)
    side = 1 if d_ccw <= d_cw else -1
    if side > 0:
        lo, hi = a_ang, ang_norm(w_angle + 0.5 * math.pi)
    else:
        lo, hi = ang_norm(w_angle - 0.5 * math.pi), b_ang
    span = ccw_delta(lo, hi)
    if not (1e-9 < span < math.pi):
        return None
    # Interior cone at a CCW-polygon vertex: CCW from the outgoing wall to the
    # incoming wall.
    k = 64
    for j in range(1, k):
        theta = ang_norm(lo + span * j / k)
        if in_ccw_interval(theta, b_ang, a_ang, slack=-1e-9):
            return -side
    return None


def _chain_to_elements(chain: PiecewisePath, anchor: Point) -> list:
    elems: list = [anchor]
    for k, piece in enumerate(chain.pieces):
        if k > 0:
            elems.append(piece.start)
        elems.append(piece)
    return elems


def _trace_region(
    poly: SimplePolygon,
    anchor: Point,
    vi: int,
    chain: PiecewisePath,
    sweep: int,
    tol: float,
    obstacles: Sequence,
):
    v = poly.vertices[vi]
    last = chain.pieces[-1]
    arrive = last.tangent_at(last.length).angle()
    probe = v + unit_vector(arrive + sweep * 0.5 * math.pi) * (1e-6 * poly.diameter)
    if poly.contains(probe) == "outside":
        return None
    state = TouchState(
        touched_chain=_chain_to_elements(chain, anchor),
        unwind_param=chain.total_length,
        string_constant=chain.total_length,
        sweep=sweep,
        march=-1,
        leg_angle=arrive,
    )
    stop = StopConditions(polygon=poly, obstacles=tuple(obstacles))
    pieces = []
    tip = v
    escalations = 0
    for _ in range(_MAX_PIECES):
        piece = trace_normal_touch_curve(tip, state, stop, tol)
        if piece is not None:
            pieces.append(piece)
            tip = piece.end
        reason = state.stop_reason
        if reason == "wall":
            return pieces, state.hit_point, state.hit_edge
        if reason in ("straighten", "wrap_vertex"):
            escalations += 1
            if escalations > 4 * _MAX_LEVEL:
                raise ToleranceUnachievable("escalation depth exceeded")
            continue
        if reason == "wrap_curve":
            raise ToleranceUnachievable("string wrapped onto a foreign curved support")
        if reason in ("chain_end", "max_sweep", "touch_cross", "max_unwind"):
            return None
    raise ToleranceUnachievable("trace did not close against the boundary")


def _closing_walk(
    poly: SimplePolygon, hit: Point, hit_edge: int, vi: int, direction: int
) -> Optional[list]:
    vs = poly.vertices
    n = len(vs)
    pts = [hit]
    k = (hit_edge + 1) % n if direction > 0 else hit_edge
    for _ in range(n + 1):
        pts.append(vs[k])
        if k == vi:
            return pts
        k = (k + direction) % n
    return None


def _edge_of_point(poly: SimplePolygon, p: Point) -> int:
    best, best_d = 0, math.inf
    for ei, (a, b) in enumerate(poly.edges()):
        d = point_segment_distance(p, a, b)
        if d < best_d:
            best, best_d = ei, d
    return best


def _attachment_intervals(poly: SimplePolygon, walk: list) -> tuple:
    out = []
    edges = poly.edges()
    for a, b in zip(walk, walk[1:]):
        if a.dist(b) == 0.0:
            continue
        ei = _edge_of_point(poly, Point(0.5 * (a.x + b.x), 0.5 * (a.y + b.y)))
        ea, eb = edges[ei]
        ed = (eb - ea).unit()
        L = ea.dist(eb)
        t0 = (a - ea).dot(ed) / L
        t1 = (b - ea).dot(ed) / L
        out.append((ei, min(t0, t1), max(t0, t1)))
    return tuple(out)


def build_dead_region(poly: SimplePolygon, anchor: Point, tol: float = None) -> list:
    """All dead regions for an anchor point strictly inside the polygon."""
    if poly.contains(anchor) != "inside":
        raise AnchorOutside(f"anchor {anchor.as_tuple()} not strictly inside")
    if tol is None:
        tol = 1e-7 * poly.diameter
    reflex = poly.reflex_indices()
    if not reflex:
        return []
    order = sorted(
        reflex,
        key=lambda vi: shortest_path_simple(poly, anchor, poly.vertices[vi]).total_length,
    )
    regions: list = []
    for vi in order:
        v = poly.vertices[vi]
        try:
            if regions:
                domain = subtract_regions(
                    poly, regions, delta=max(tol, 1e-6 * poly.diameter)
                )
                chain = shortest_path_domain(domain, anchor, v)
            else:
                chain = shortest_path_simple(poly, anchor, v)
        except Exception:
            continue
        w_angle = ang_norm((chain.tangent_at(chain.total_length) * -1.0).angle())
        sweep = _seed_sweep(poly, vi, w_angle)
        if sweep is None:
            continue
        obstacles = [p for r in regions for p in r.pieces if isinstance(p, Arc)]
        traced = _trace_region(poly, anchor, vi, chain, sweep, tol, obstacles)
        if traced is None:
            continue
        pieces, hit, hit_edge = traced
        if not pieces or hit is None:
            continue
        if hit_edge is None or point_segment_distance(
            hit, *poly.edges()[hit_edge]
        ) > 1e-6 * poly.diameter:
            hit_edge = _edge_of_point(poly, hit)
        walk = None
        for direction in (1, -1):
            cand = _closing_walk(poly, hit, hit_edge, vi, direction)
            if cand is None:
                continue
            ring = []
            for piece in pieces:
                chain_pts = piece.flatten(max(tol, 1e-6 * poly.diameter))
                ring.extend(chain_pts if not ring else chain_pts[1:])
            for p in cand[1:]:
                if p.dist(ring[-1]) > 0.0:
                    ring.append(p)
            if ring and ring[0].dist(ring[-1]) < 1e-12:
                ring.pop()
            if len(ring) < 3:
                continue
            shp = ShpPolygon([p.as_tuple() for p in ring])
            if not shp.is_valid or shp.area <= 1e-14 * poly.diameter**2:
                continue
            if shp.contains(ShpPoint(anchor.as_tuple())):
                continue
            if shp.area > 0.95 * abs(poly.area):
                continue
            walk = cand
            break
        if walk is None:
            continue
        wall_segments = tuple(
            Segment(a, b) for a, b in zip(walk, walk[1:]) if a.dist(b) > 0.0
        )
        regions.append(
            DeadRegion(
                anchor=anchor,
                pieces=tuple(pieces),
                wall=wall_segments,
                attachment=_attachment_intervals(poly, walk),
                tolerance=tol,
                seed_index=vi,
            )
        )
    return regions


# --- domain subtraction -------------------------------------------------------


def subtract_regions(
    poly: SimplePolygon, regions: Sequence[DeadRegion], delta: float
) -> DiscretizedDomain:
    """Flattened polygon minus the union of regions, edges tagged by source."""
    from shapely.geometry.polygon import orient as shp_orient

    shp = ShpPolygon([p.as_tuple() for p in poly.vertices])
    pieces_map = {}
    # Computed attachment points sit within float error of the boundary; a
    # hair of dilation makes the boolean difference trim instead of punching
    # a detached hole.
    eps = 1e-9 * poly.diameter
    for ri, reg in enumerate(regions):
        for pi, piece in enumerate(reg.pieces):
            pieces_map[(ri, pi)] = piece
        flat = reg.flatten(delta)
        if len(flat) < 3:
            continue
        reg_poly = ShpPolygon([p.as_tuple() for p in flat])
        if not reg_poly.is_valid:
            reg_poly = reg_poly.buffer(0)
        shp = shp.difference(reg_poly.buffer(eps, quad_segs=2))
    if shp.is_empty:
        raise EmptyDomain("dead regions cover the whole polygon")
    if shp.geom_type == "Polygon":
        comps = [shp]
    else:
        comps = [g for g in shp.geoms if g.geom_type == "Polygon"]
    comps = [c for c in comps if c.area > 1e-14 * poly.diameter**2]
    if not comps:
        raise EmptyDomain("dead regions cover the whole polygon")
    if any(len(list(c.interiors)) for c in comps):
        raise EmptyDomain("a dead region detached from the polygon boundary")
    comps.sort(key=lambda c: -c.area)
    loops = []
    tag_band = 2.0 * delta + 1e-9 * poly.diameter
    for comp in comps:
        comp = shp_orient(comp, 1.0)
        pts = [Point(x, y) for x, y in list(comp.exterior.coords)[:-1]]
        tags = []
        for a, b in zip(pts, pts[1:] + pts[:1]):
            mid = Point(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
            tag = None
            best = tag_band
            for key, piece in pieces_map.items():
                d = piece_point_distance(mid, piece)
                if d < best:
                    best = d
                    tag = ("piece", key)
            if tag is None:
                tag = ("poly", _edge_of_point(poly, mid))
            tags.append(tag)
        loops.append(DomainLoop(points=pts, tags=tags))
    return DiscretizedDomain(
        loops=loops,
        delta=delta,
        source_polygon=poly,
        pieces=pieces_map,
        regions=list(regions),
    )
