"""Planar primitives: robust orientation, polygon validation, point location.

Coordinates are plain binary floats.  The orientation predicate uses a
floating-point filter with an exact rational fallback, which keeps every
downstream classification (simplicity, point location, ear clipping)
consistent for inputs up to ~1e9 in magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import Degenerate, NotSimple

# Relative error bound for the 2x2 determinant filter (double precision).
_ORIENT_EPS = 3.3306690738754716e-16


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    def __add__(self, o: "Point") -> "Point":
        return Point(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "Point") -> "Point":
        return Point(self.x - o.x, self.y - o.y)

    def __mul__(self, k: float) -> "Point":
        return Point(self.x * k, self.y * k)

    __rmul__ = __mul__

    def dot(self, o: "Point") -> float:
        return self.x * o.x + self.y * o.y

    def cross(self, o: "Point") -> float:
        return self.x * o.y - self.y * o.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, o: "Point") -> float:
        return math.hypot(self.x - o.x, self.y - o.y)

    def unit(self) -> "Point":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize zero vector")
        return Point(self.x / n, self.y / n)

    def perp(self) -> "Point":
        """Counter-clockwise quarter turn."""
        return Point(-self.y, self.x)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def as_tuple(self) -> tuple:
        return (self.x, self.y)


def unit_vector(angle: float) -> Point:
    return Point(math.cos(angle), math.sin(angle))


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of twice the signed area of triangle abc: +1 CCW, -1 CW, 0 collinear."""
    detleft = (b.x - a.x) * (c.y - a.y)
    detright = (b.y - a.y) * (c.x - a.x)
    det = detleft - detright
    detsum = abs(detleft) + abs(detright)
    if abs(det) > _ORIENT_EPS * detsum:
        return 1 if det > 0 else -1
    # Exact fallback; float inputs convert losslessly to rationals.
    det = (Fraction(b.x) - Fraction(a.x)) * (Fraction(c.y) - Fraction(a.y)) - (
        Fraction(b.y) - Fraction(a.y)
    ) * (Fraction(c.x) - Fraction(a.x))
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ab = b - a
    denom = ab.dot(ab)
    if denom == 0.0:
        return p.dist(a)
    t = (p - a).dot(ab) / denom
    t = min(1.0, max(0.0, t))
    return p.dist(a + ab * t)


def on_segment(p: Point, a: Point, b: Point, tol: float = 0.0) -> bool:
    if tol > 0.0:
        return point_segment_distance(p, a, b) <= tol
    if orient(a, b, p) != 0:
        return False
    return (
        min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True iff open segments ab and cd intersect properly (single interior point)."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def segments_touch_or_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True iff closed segments ab and cd share at least one point."""
    if segments_cross(a, b, c, d):
        return True
    return (
        on_segment(c, a, b)
        or on_segment(d, a, b)
        or on_segment(a, c, d)
        or on_segment(b, c, d)
    )


def segment_intersection(a: Point, b: Point, c: Point, d: Point):
    """Intersection point of lines ab and cd, or None if parallel."""
    r = b - a
    s = d - c
    denom = r.cross(s)
    if denom == 0.0:
        return None
    t = (c - a).cross(s) / denom
    return a + r * t


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane bounded by the line through `anchor` along `direction`.

    `inward` is the unit normal pointing into the kept side:
    the half-plane is {x : (x - anchor) . inward >= 0}.
    """

    anchor: Point
    direction: Point
    inward: Point

    def __post_init__(self):
        if abs(self.direction.norm() - 1.0) > 1e-12:
            raise ValueError("half-plane direction must be unit length")

    def signed_distance(self, p: Point) -> float:
        return (p - self.anchor).dot(self.inward)

    def contains(self, p: Point, tol: float = 0.0) -> bool:
        return self.signed_distance(p) >= -tol


class SimplePolygon:
    """Validated simple polygon with CCW vertex chain.

    Construct via :func:`validate_polygon`; instances are immutable.
    """

    __slots__ = ("vertices", "_area", "_diameter")

    def __init__(self, vertices: Sequence[Point], _skip_checks: bool = False):
        if not _skip_checks:
            raise TypeError("use validate_polygon() to construct a SimplePolygon")
        self.vertices: tuple = tuple(vertices)
        self._area = None
        self._diameter = None

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplePolygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"SimplePolygon({len(self.vertices)} vertices, area={self.area:.6g})"

    @property
    def area(self) -> float:
        if self._area is None:
            self._area = 0.5 * sum(
                a.cross(b) for a, b in zip(self.vertices, self._rolled())
            )
        return self._area

    @property
    def diameter(self) -> float:
        if self._diameter is None:
            vs = self.vertices
            self._diameter = max(
                vs[i].dist(vs[j])
                for i in range(len(vs))
                for j in range(i + 1, len(vs))
            )
        return self._diameter

    def _rolled(self):
        return self.vertices[1:] + self.vertices[:1]

    def edges(self) -> Iterable[tuple]:
        return list(zip(self.vertices, self._rolled()))

    def is_reflex(self, i: int) -> bool:
        vs = self.vertices
        n = len(vs)
        return orient(vs[(i - 1) % n], vs[i], vs[(i + 1) % n]) < 0

    def reflex_indices(self) -> list:
        return [i for i in range(len(self.vertices)) if self.is_reflex(i)]

    def boundary_tolerance(self) -> float:
        return 1e-9 * self.diameter

    def contains(self, p: Point, band: float = None) -> str:
        """Classify p as 'inside', 'boundary' or 'outside'.

        Boundary detection uses a band of 1e-9 * diameter unless overridden.
        """
        if band is None:
            band = self.boundary_tolerance()
        for a, b in self.edges():
            if point_segment_distance(p, a, b) <= band:
                return "boundary"
        # Ray cast towards +x.  Boundary grazing was handled above, so the
        # standard half-open rule is safe here.
        crossings = 0
        for a, b in self.edges():
            if (a.y > p.y) != (b.y > p.y):
                x_int = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
                if x_int > p.x:
                    crossings += 1
        return "inside" if crossings % 2 == 1 else "outside"


def _dedupe_and_merge(vertices: Sequence[Point], scale: float) -> list:
    eps = 1e-12 * scale
    pts = list(vertices)
    # Drop consecutive (near-)duplicates, wrapping around.
    out = []
    for p in pts:
        if out and p.dist(out[-1]) <= eps:
            continue
        out.append(p)
    while len(out) > 1 and out[0].dist(out[-1]) <= eps:
        out.pop()
    # Merge collinear consecutive triples until stable.
    changed = True
    while changed and len(out) >= 3:
        changed = False
        for i in range(len(out)):
            a = out[(i - 1) % len(out)]
            b = out[i]
            c = out[(i + 1) % len(out)]
            if orient(a, b, c) == 0:
                out.pop(i)
                changed = True
                break
    return out


def validate_polygon(vertices: Sequence) -> SimplePolygon:
    """Normalize to a CCW simple polygon or raise NotSimple / Degenerate."""
    pts = [v if isinstance(v, Point) else Point(float(v[0]), float(v[1])) for v in vertices]
    if len(pts) < 3:
        raise Degenerate("polygon needs at least 3 vertices")
    scale = max(max(abs(p.x), abs(p.y)) for p in pts) or 1.0
    pts = _dedupe_and_merge(pts, scale)
    if len(pts) < 3:
        raise Degenerate("polygon collapses after removing duplicate/collinear vertices")
    area2 = sum(a.cross(b) for a, b in zip(pts, pts[1:] + pts[:1]))
    if area2 == 0.0:
        raise Degenerate("polygon has zero signed area")
    if area2 < 0.0:
        pts.reverse()
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = pts[j], pts[(j + 1) % n]
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # shared endpoint pairs are fine by construction
            if segments_touch_or_cross(a, b, c, d):
                raise NotSimple(f"edges {i} and {j} intersect")
        # Adjacent edges may only share the common vertex.
        c, d = pts[(i + 1) % n], pts[(i + 2) % n]
        if on_segment(d, a, b) and d.dist(b) > 0 or on_segment(a, c, d) and a.dist(c) > 0:
            raise NotSimple(f"adjacent edges {i}, {(i + 1) % n} overlap")
    return SimplePolygon(pts, _skip_checks=True)


def segment_clips_polygon(a: Point, b: Point, poly: SimplePolygon) -> bool:
    """True iff the open segment ab leaves the closed polygon.

    Both endpoints are assumed inside or on the boundary.
    """
    band = poly.boundary_tolerance()
    if a.dist(b) <= band:
        return False
    for c, d in poly.edges():
        if segments_cross(a, b, c, d):
            return True
    # Collect boundary contacts along ab, then probe midpoints between them.
    params = [0.0, 1.0]
    ab = b - a
    len2 = ab.dot(ab)
    for c, d in poly.edges():
        for q in (c, d):
            if on_segment(q, a, b, band):
                params.append(min(1.0, max(0.0, (q - a).dot(ab) / len2)))
        hit = segment_intersection(a, b, c, d)
        if hit is not None and on_segment(hit, a, b, band) and on_segment(hit, c, d, band):
            params.append(min(1.0, max(0.0, (hit - a).dot(ab) / len2)))
    params = sorted(set(round(t, 15) for t in params))
    for t0, t1 in zip(params, params[1:]):
        if t1 - t0 < 1e-12:
            continue
        mid = a + ab * ((t0 + t1) / 2.0)
        if poly.contains(mid) == "outside":
            return True
    return False


# --- angle-interval helpers (used by dead-region seeding) ---


def ang_norm(a: float) -> float:
    """Normalize to [0, 2*pi)."""
    a = math.fmod(a, 2.0 * math.pi)
    return a + 2.0 * math.pi if a < 0.0 else a


def ccw_delta(a: float, b: float) -> float:
    """CCW angular distance from a to b, in [0, 2*pi)."""
    return ang_norm(b - a)


def in_ccw_interval(theta: float, start: float, end: float, slack: float = 0.0) -> bool:
    """True iff theta lies in the CCW interval from start to end."""
    return ccw_delta(start, theta) <= ccw_delta(start, end) + slack
