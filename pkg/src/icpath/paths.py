"""Directed piecewise-smooth paths: segments, circular arcs, traced curves.

Paths are immutable chains of pieces sharing endpoints.  Arc-length
parametrization, tangents and normal fans (a single perpendicular at smooth
points, the closed double wedge at bend points) live here; property checks
live in :mod:`icpath.verify`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import EndpointMismatch, OutOfRange, TangentInLine
from .geom import HalfPlane, Point, unit_vector

_JOINT_TOL = 1e-9  # relative endpoint matching between consecutive pieces
MAX_TANGENT_STEP = 0.2  # radians between consecutive traced samples


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a.dist(self.b) == 0.0:
            raise ValueError("zero-length segment")

    @property
    def length(self) -> float:
        return self.a.dist(self.b)

    @property
    def start(self) -> Point:
        return self.a

    @property
    def end(self) -> Point:
        return self.b

    def direction(self) -> Point:
        return (self.b - self.a).unit()

    def point_at(self, s: float) -> Point:
        return self.a + self.direction() * s

    def tangent_at(self, s: float) -> Point:
        return self.direction()

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)

    def flatten(self, delta: float) -> list:
        return [self.a, self.b]


@dataclass(frozen=True)
class Arc:
    center: Point
    radius: float
    start_angle: float
    sweep: float  # signed radians, CCW positive

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError("arc radius must be positive")
        if not (0.0 < abs(self.sweep) < 2.0 * math.pi):
            raise ValueError("arc sweep must be nonzero and below a full turn")

    @property
    def length(self) -> float:
        return self.radius * abs(self.sweep)

    def angle_at(self, s: float) -> float:
        return self.start_angle + self.sweep * (s / self.length)

    @property
    def start(self) -> Point:
        return self.center + unit_vector(self.start_angle) * self.radius

    @property
    def end(self) -> Point:
        return self.center + unit_vector(self.start_angle + self.sweep) * self.radius

    def point_at(self, s: float) -> Point:
        return self.center + unit_vector(self.angle_at(s)) * self.radius

    def tangent_at(self, s: float) -> Point:
        th = self.angle_at(s)
        sgn = 1.0 if self.sweep > 0 else -1.0
        return Point(-math.sin(th), math.cos(th)) * sgn

    def reversed(self) -> "Arc":
        return Arc(self.center, self.radius, self.start_angle + self.sweep, -self.sweep)

    def flatten(self, delta: float) -> list:
        # Chordal (sagitta) error R*(1-cos(step/2)) <= delta.
        if delta >= self.radius:
            step = abs(self.sweep)
        else:
            step = 2.0 * math.acos(max(-1.0, 1.0 - delta / self.radius))
        k = max(2, int(math.ceil(abs(self.sweep) / max(step, 1e-9))) + 1)
        return [
            self.center + unit_vector(self.start_angle + self.sweep * i / (k - 1)) * self.radius
            for i in range(k)
        ]


@dataclass(frozen=True)
class Traced:
    """Polyline approximation of a traced curve, with tangents at samples.

    Tangents are stored so downstream normal computations never have to
    differentiate the polyline numerically.  `generator` records how the
    curve was produced (supporting structure of a normal-touch trace).
    """

    samples: tuple  # ((arclen, Point, unit tangent Point), ...)
    tolerance: float
    generator: Optional[dict] = None

    def __post_init__(self):
        if len(self.samples) < 2:
            raise ValueError("traced piece needs at least two samples")
        prev_s = None
        prev_t = None
        for s, p, t in self.samples:
            if prev_s is not None:
                if s <= prev_s:
                    raise ValueError("traced sample arclens must strictly increase")
                dev = math.acos(min(1.0, max(-1.0, t.dot(prev_t))))
                if dev >= MAX_TANGENT_STEP:
                    raise ValueError("traced sample tangents deviate too much")
            prev_s, prev_t = s, t

    @property
    def length(self) -> float:
        return self.samples[-1][0] - self.samples[0][0]

    @property
    def start(self) -> Point:
        return self.samples[0][1]

    @property
    def end(self) -> Point:
        return self.samples[-1][1]

    def _locate(self, s: float) -> int:
        s0 = self.samples[0][0]
        lo, hi = 0, len(self.samples) - 1
        target = s0 + s
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.samples[mid][0] <= target:
                lo = mid
            else:
                hi = mid
        return lo

    def point_at(self, s: float) -> Point:
        i = self._locate(s)
        s0, p0, t0 = self.samples[i]
        s1, p1, t1 = self.samples[i + 1]
        seg = s1 - s0
        f = 0.0 if seg == 0.0 else (self.samples[0][0] + s - s0) / seg
        f = min(1.0, max(0.0, f))
        return _arc_blend(p0, t0, p1, f)

    def tangent_at(self, s: float) -> Point:
        i = self._locate(s)
        s0, p0, t0 = self.samples[i]
        s1, p1, t1 = self.samples[i + 1]
        seg = s1 - s0
        f = 0.0 if seg == 0.0 else (self.samples[0][0] + s - s0) / seg
        a0, a1 = t0.angle(), t1.angle()
        da = math.remainder(a1 - a0, 2.0 * math.pi)
        return unit_vector(a0 + f * da)

    def reversed(self) -> "Traced":
        total = self.samples[-1][0]
        rev = tuple(
            (total - s, p, t * -1.0) for s, p, t in reversed(self.samples)
        )
        return Traced(rev, self.tolerance, self.generator)

    def flatten(self, delta: float) -> list:
        return [p for _, p, _ in self.samples]


def _arc_blend(p0: Point, t0: Point, p1: Point, f: float) -> Point:
    """Point at fraction f along the circular arc through p0 (tangent t0) and p1."""
    chord = p1 - p0
    c = chord.norm()
    if c == 0.0:
        return p0
    # Signed turn from the tangent to the chord; the arc subtends twice that.
    alpha = math.atan2(t0.cross(chord), t0.dot(chord))
    if abs(alpha) < 1e-9:
        return p0 + chord * f
    radius = c / (2.0 * math.sin(abs(alpha)))
    side = 1.0 if alpha > 0 else -1.0
    center = p0 + t0.perp() * (side * radius)
    a0 = (p0 - center).angle()
    a1 = (p1 - center).angle()
    da = math.remainder(a1 - a0, 2.0 * math.pi)
    return center + unit_vector(a0 + f * da) * radius


CurvePiece = (Segment, Arc, Traced)


@dataclass(frozen=True)
class NormalFan:
    """Normal line(s) at a path point.

    Smooth points carry one perpendicular line; bend points carry the closed
    double wedge between the perpendiculars of the two meeting tangents.
    `backward` and `forward` are the incoming and outgoing travel directions.
    """

    at: Point
    backward: Point
    forward: Point

    def __post_init__(self):
        turn = _angle_between(self.backward, self.forward)
        if turn >= math.pi - 1e-12:
            raise ValueError("bend wedge must span less than pi")

    @property
    def is_bend(self) -> bool:
        return _angle_between(self.backward, self.forward) > 1e-12

    def turn_angle(self) -> float:
        return _angle_between(self.backward, self.forward)

    def line_directions(self, interior: int = 0) -> list:
        """Directions of wedge lines: both extremes plus `interior` samples."""
        d0 = self.backward.perp()
        if not self.is_bend:
            return [d0]
        a0 = self.backward.angle()
        da = math.remainder(self.forward.angle() - a0, 2.0 * math.pi)
        ks = [0.0, 1.0] + [(i + 1) / (interior + 1) for i in range(interior)]
        return [unit_vector(a0 + k * da).perp() for k in sorted(set(ks))]

    def tangent_for_line(self, direction: Point) -> Point:
        """The wedge tangent whose perpendicular is the given line direction."""
        cand = Point(direction.y, -direction.x)  # -perp
        # The wedge tangent lies between backward and forward; pick the sign
        # that does.
        for d in (cand, cand * -1.0):
            a0 = self.backward.angle()
            da = math.remainder(self.forward.angle() - a0, 2.0 * math.pi)
            rel = math.remainder(d.angle() - a0, 2.0 * math.pi)
            if da >= 0 and -1e-9 <= rel <= da + 1e-9:
                return d
            if da < 0 and da - 1e-9 <= rel <= 1e-9:
                return d
        raise TangentInLine("line does not belong to this normal fan")


def _angle_between(a: Point, b: Point) -> float:
    return abs(math.atan2(a.cross(b), a.dot(b)))


def half_planes(fan: NormalFan, line_direction: Point = None):
    """(negative, positive) closed half-planes of a fan line.

    The positive side contains the forward travel direction (outgoing tangent
    for lines inside a bend wedge).
    """
    if line_direction is None:
        line_direction = fan.line_directions()[0]
    d = line_direction.unit()
    n = d.perp()
    s = n.dot(fan.forward)
    if abs(s) < 1e-12:
        raise TangentInLine("line is parallel to the travel direction")
    inward_pos = n if s > 0 else n * -1.0
    positive = HalfPlane(fan.at, d, inward_pos)
    negative = HalfPlane(fan.at, d, inward_pos * -1.0)
    return negative, positive


class PiecewisePath:
    """Directed chain of curve pieces with shared endpoints."""

    __slots__ = ("pieces", "_cum", "_disc_cache")

    def __init__(self, pieces: Sequence):
        pieces = [p for p in pieces if p.length > 0.0]
        if not pieces:
            raise ValueError("path needs at least one piece")
        scale = max(
            max(abs(p.start.x), abs(p.start.y), abs(p.end.x), abs(p.end.y))
            for p in pieces
        ) or 1.0
        for p, q in zip(pieces, pieces[1:]):
            if p.end.dist(q.start) > _JOINT_TOL * scale:
                raise EndpointMismatch(
                    f"piece ends at {p.end.as_tuple()} but next starts at {q.start.as_tuple()}"
                )
        self.pieces = tuple(pieces)
        cum = [0.0]
        for p in pieces:
            cum.append(cum[-1] + p.length)
        self._cum = tuple(cum)
        self._disc_cache = {}

    # --- basic accessors ---

    @property
    def start(self) -> Point:
        return self.pieces[0].start

    @property
    def end(self) -> Point:
        return self.pieces[-1].end

    @property
    def total_length(self) -> float:
        return self._cum[-1]

    def piece_boundaries(self) -> list:
        return list(self._cum)

    def _locate(self, s: float):
        if s < -1e-9 or s > self.total_length + 1e-9:
            raise OutOfRange(f"arc length {s} outside [0, {self.total_length}]")
        s = min(max(s, 0.0), self.total_length)
        lo, hi = 0, len(self.pieces)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._cum[mid] <= s:
                lo = mid
            else:
                hi = mid
        return lo, s - self._cum[lo]

    def point_at(self, s: float) -> Point:
        i, ds = self._locate(s)
        return self.pieces[i].point_at(ds)

    def tangent_at(self, s: float, side: str = "auto") -> Point:
        """Unit tangent at arc length s; `side` picks 'left'/'right' at joints."""
        i, ds = self._locate(s)
        eps = 1e-12 * max(self.total_length, 1.0)
        if side == "left" or (side == "auto" and ds <= eps and i > 0 and s > eps):
            if ds <= eps and i > 0:
                prev = self.pieces[i - 1]
                return prev.tangent_at(prev.length)
        if ds >= self.pieces[i].length - eps and i + 1 < len(self.pieces) and side == "right":
            return self.pieces[i + 1].tangent_at(0.0)
        return self.pieces[i].tangent_at(ds)

    def normal_at(self, s: float) -> NormalFan:
        i, ds = self._locate(s)
        p = self.pieces[i].point_at(ds)
        t_right = self.tangent_at(s, side="right") if ds >= self.pieces[i].length - 1e-12 else self.pieces[i].tangent_at(ds)
        t_left = self.tangent_at(s, side="left")
        return NormalFan(at=p, backward=t_left, forward=t_right)

    def bends(self) -> list:
        """(arclen, incoming tangent, outgoing tangent) at interior joints with a turn."""
        out = []
        for i in range(1, len(self.pieces)):
            t_in = self.pieces[i - 1].tangent_at(self.pieces[i - 1].length)
            t_out = self.pieces[i].tangent_at(0.0)
            if _angle_between(t_in, t_out) > 1e-12:
                out.append((self._cum[i], t_in, t_out))
        return out

    def reverse(self) -> "PiecewisePath":
        return PiecewisePath([p.reversed() for p in reversed(self.pieces)])

    def flatten(self, delta: float) -> list:
        pts = []
        for p in self.pieces:
            chain = p.flatten(delta)
            if pts:
                chain = chain[1:]
            pts.extend(chain)
        return pts

    # --- vectorized evaluation ---

    def points_at(self, params: np.ndarray) -> np.ndarray:
        """Positions at an array of arc-length parameters, shape (n, 2)."""
        s = np.clip(np.asarray(params, dtype=float), 0.0, self.total_length)
        out = np.empty((len(s), 2))
        cum = np.asarray(self._cum)
        idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(self.pieces) - 1)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if not mask.any():
                continue
            ds = s[mask] - cum[i]
            if isinstance(piece, Segment):
                d = piece.direction()
                out[mask, 0] = piece.a.x + d.x * ds
                out[mask, 1] = piece.a.y + d.y * ds
            elif isinstance(piece, Arc):
                th = piece.start_angle + piece.sweep * (ds / piece.length)
                out[mask, 0] = piece.center.x + piece.radius * np.cos(th)
                out[mask, 1] = piece.center.y + piece.radius * np.sin(th)
            else:
                ss = np.array([smp[0] for smp in piece.samples])
                xs = np.array([smp[1].x for smp in piece.samples])
                ys = np.array([smp[1].y for smp in piece.samples])
                t = ss[0] + ds
                out[mask, 0] = np.interp(t, ss, xs)
                out[mask, 1] = np.interp(t, ss, ys)
        return out

    def tangents_at(self, params: np.ndarray) -> np.ndarray:
        """Unit tangents at an array of parameters, shape (n, 2)."""
        s = np.clip(np.asarray(params, dtype=float), 0.0, self.total_length)
        out = np.empty((len(s), 2))
        cum = np.asarray(self._cum)
        idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(self.pieces) - 1)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if not mask.any():
                continue
            ds = s[mask] - cum[i]
            if isinstance(piece, Segment):
                d = piece.direction()
                out[mask, 0] = d.x
                out[mask, 1] = d.y
            elif isinstance(piece, Arc):
                th = piece.start_angle + piece.sweep * (ds / piece.length)
                sgn = 1.0 if piece.sweep > 0 else -1.0
                out[mask, 0] = -np.sin(th) * sgn
                out[mask, 1] = np.cos(th) * sgn
            else:
                ss = np.array([smp[0] for smp in piece.samples])
                txs = np.array([smp[2].x for smp in piece.samples])
                tys = np.array([smp[2].y for smp in piece.samples])
                t = ss[0] + ds
                tx = np.interp(t, ss, txs)
                ty = np.interp(t, ss, tys)
                nrm = np.hypot(tx, ty)
                out[mask, 0] = tx / nrm
                out[mask, 1] = ty / nrm
        return out

    def discretize(self, m: int):
        """(params, points, tangents) on a grid including piece boundaries."""
        key = m
        if key in self._disc_cache:
            return self._disc_cache[key]
        grid = [np.asarray(self._cum)]
        L = self.total_length
        for i, piece in enumerate(self.pieces):
            k = max(2, int(round(m * piece.length / L)))
            grid.append(self._cum[i] + np.linspace(0.0, piece.length, k))
        params = np.unique(np.concatenate(grid))
        pts = self.points_at(params)
        tans = self.tangents_at(params)
        self._disc_cache[key] = (params, pts, tans)
        return self._disc_cache[key]


def length(path: PiecewisePath) -> float:
    return path.total_length


def concat(p1: PiecewisePath, p2: PiecewisePath) -> PiecewisePath:
    scale = max(p1.total_length, p2.total_length, 1.0)
    if p1.end.dist(p2.start) > _JOINT_TOL * scale:
        raise EndpointMismatch("paths do not share an endpoint")
    return PiecewisePath(list(p1.pieces) + list(p2.pieces))


def reverse(path: PiecewisePath) -> PiecewisePath:
    return path.reverse()


def polyline_path(points: Sequence[Point]) -> PiecewisePath:
    """Path of segments through the given points (consecutive duplicates dropped)."""
    pieces = []
    for a, b in zip(points, points[1:]):
        if a.dist(b) > 0.0:
            pieces.append(Segment(a, b))
    return PiecewisePath(pieces)


# --- serialization (JSON-friendly piece list) ---


def piece_to_json(piece) -> dict:
    if isinstance(piece, Segment):
        return {"kind": "segment", "a": [piece.a.x, piece.a.y], "b": [piece.b.x, piece.b.y]}
    if isinstance(piece, Arc):
        return {
            "kind": "arc",
            "center": [piece.center.x, piece.center.y],
            "radius": piece.radius,
            "start_angle": piece.start_angle,
            "sweep": piece.sweep,
        }
    if isinstance(piece, Traced):
        return {
            "kind": "traced",
            "samples": [[s, p.x, p.y, t.x, t.y] for s, p, t in piece.samples],
            "tolerance": piece.tolerance,
        }
    raise TypeError(f"unknown piece {piece!r}")


def piece_from_json(obj: dict):
    kind = obj["kind"]
    if kind == "segment":
        return Segment(Point(*obj["a"]), Point(*obj["b"]))
    if kind == "arc":
        return Arc(Point(*obj["center"]), obj["radius"], obj["start_angle"], obj["sweep"])
    if kind == "traced":
        samples = tuple(
            (s, Point(x, y), Point(tx, ty)) for s, x, y, tx, ty in obj["samples"]
        )
        return Traced(samples, obj["tolerance"])
    raise ValueError(f"unknown piece kind {kind!r}")


def path_to_json(path: PiecewisePath) -> list:
    return [piece_to_json(p) for p in path.pieces]


def path_from_json(data: list) -> PiecewisePath:
    return PiecewisePath([piece_from_json(obj) for obj in data])
