"""Named fixture instances and seeded generators used by tests and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import Point, SimplePolygon, validate_polygon


@dataclass(frozen=True)
class Instance:
    name: str
    polygon: SimplePolygon
    s: Point
    t: Point

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "polygon": [[v.x, v.y] for v in self.polygon.vertices],
            "s": [self.s.x, self.s.y],
            "t": [self.t.x, self.t.y],
        }


def instance_from_json(obj: dict) -> Instance:
    return Instance(
        name=obj.get("name", "unnamed"),
        polygon=validate_polygon(obj["polygon"]),
        s=Point(*obj["s"]),
        t=Point(*obj["t"]),
    )


def square() -> Instance:
    poly = validate_polygon([(0, 0), (10, 0), (10, 10), (0, 10)])
    return Instance("square", poly, Point(2, 2), Point(8, 8))


def dart() -> Instance:
    poly = validate_polygon([(0, 0), (10, 0), (10, 10), (5, 5), (0, 10)])
    return Instance("dart", poly, Point(1, 7), Point(9, 7))


def hook() -> Instance:
    poly = validate_polygon([(0, 0), (12, 0), (12, 10), (6.5, 4), (6, 10), (0, 10)])
    return Instance("hook", poly, Point(3, 9), Point(10.5, 8))


def random_convex(seed: int, n_min: int = 5, n_max: int = 12) -> Instance:
    """Random convex polygon with an interior point pair."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
    radii = rng.uniform(3.0, 10.0, size=n)
    pts = [(float(r * math.cos(a)), float(r * math.sin(a))) for a, r in zip(angles, radii)]
    # Convex hull of the sampled points keeps the polygon convex.
    hull = _convex_hull(pts)
    poly = validate_polygon(hull)
    cx = sum(p.x for p in poly.vertices) / len(poly.vertices)
    cy = sum(p.y for p in poly.vertices) / len(poly.vertices)
    centroid = Point(cx, cy)

    def interior_point() -> Point:
        while True:
            v = poly.vertices[int(rng.integers(0, len(poly.vertices)))]
            lam = float(rng.uniform(0.15, 0.85))
            q = centroid + (v - centroid) * lam
            if poly.contains(q) == "inside":
                return q

    s = interior_point()
    while True:
        t = interior_point()
        if s.dist(t) > 0.05 * poly.diameter:
            break
    return Instance(f"convex-{seed}", poly, s, t)


def _convex_hull(pts: list) -> list:
    pts = sorted(set(pts))
    if len(pts) < 3:
        raise ValueError("not enough distinct points for a hull")

    def half(points):
        out = []
        for p in points:
            while len(out) >= 2 and (
                (out[-1][0] - out[-2][0]) * (p[1] - out[-2][1])
                - (out[-1][1] - out[-2][1]) * (p[0] - out[-2][0])
            ) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(list(reversed(pts)))
    return lower[:-1] + upper[:-1]


def random_pocket(seed: int) -> Instance:
    """Rectangle with a V-notch from the top edge: one reflex vertex.

    The destination sits in the sliver right of the notch, the start in the
    left chamber, so deep placements force a turn beyond a quarter circle at
    the apex.
    """
    rng = np.random.default_rng(seed)
    for _ in range(200):
        W = float(rng.uniform(9.0, 14.0))
        H = float(rng.uniform(8.0, 12.0))
        ax = float(rng.uniform(0.42, 0.62)) * W
        ay = float(rng.uniform(0.3, 0.5)) * H
        x0 = ax - float(rng.uniform(0.15, 0.9))
        x1 = min(W - 0.4, ax + float(rng.uniform(2.0, 0.45 * W)))
        if x0 < 0.4 or x1 - x0 < 0.8:
            continue
        verts = [(0, 0), (W, 0), (W, H), (x1, H), (ax, ay), (x0, H), (0, H)]
        try:
            poly = validate_polygon(verts)
        except Exception:
            continue
        if len(poly.reflex_indices()) != 1:
            continue
        apex = Point(ax, ay)
        # Destination in the right sliver, near the notch wall.
        t = None
        for _ in range(50):
            fx = float(rng.uniform(0.3, 0.85))
            tx = ax + fx * (x1 - ax)
            wall_y = ay + (tx - ax) * (H - ay) / max(x1 - ax, 1e-9)
            ty = float(rng.uniform(0.55, 0.92)) * wall_y
            cand = Point(tx, ty)
            if poly.contains(cand) == "inside" and not _blocked(poly, cand, apex):
                t = cand
                break
        if t is None:
            continue
        s = None
        for _ in range(50):
            sx = float(rng.uniform(0.15, 0.8)) * x0
            sy = float(rng.uniform(0.55, 0.95)) * H
            cand = Point(sx, sy)
            if poly.contains(cand) == "inside":
                s = cand
                break
        if s is None:
            continue
        return Instance(f"pocket-{seed}", poly, s, t)
    raise RuntimeError(f"could not generate a pocket instance for seed {seed}")


def _blocked(poly: SimplePolygon, a: Point, b: Point) -> bool:
    from .geom import segment_clips_polygon

    return segment_clips_polygon(a, b, poly)


def fixture_corpus() -> list:
    """The instances exercised by the acceptance suite (>= 30)."""
    out = [square(), dart(), hook()]
    out.extend(random_pocket(seed) for seed in range(10))
    out.extend(random_convex(100 + k) for k in range(17))
    return out
