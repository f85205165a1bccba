"""Deterministic SVG rendering of instances, dead regions and result paths."""

from __future__ import annotations

from .geom import Point
from .instances import Instance
from .pipeline import IcResult

_VIEW = 1000.0
_MARGIN = 40.0


def _quant(x: float) -> str:
    return f"{x:.3f}"


class _Mapper:
    def __init__(self, points):
        xs = [p.x for p in points]
        ys = [p.y for p in points]
        self.x0, self.y0 = min(xs), min(ys)
        w = max(xs) - self.x0
        h = max(ys) - self.y0
        self.scale = (_VIEW - 2 * _MARGIN) / max(w, h, 1e-12)
        self.h = h

    def map(self, p: Point) -> tuple:
        # y grows upward in world coordinates, downward in SVG.
        return (
            _MARGIN + (p.x - self.x0) * self.scale,
            _MARGIN + (self.h - (p.y - self.y0)) * self.scale,
        )

    def poly_str(self, points) -> str:
        return " ".join(
            f"{_quant(x)},{_quant(y)}" for x, y in (self.map(p) for p in points)
        )


def render_result_svg(instance: Instance, result: IcResult, flatten_delta: float = None) -> str:
    poly = instance.polygon
    if flatten_delta is None:
        flatten_delta = 1e-3 * poly.diameter
    mapper = _Mapper(poly.vertices)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_VIEW:.0f} {_VIEW:.0f}">',
        f'<polygon class="outline" points="{mapper.poly_str(poly.vertices)}" '
        'fill="none" stroke="black" stroke-width="2"/>',
    ]
    for group_id, regions, color in (
        ("region-s", result.regions_s, "#4a7fd4"),
        ("region-t", result.regions_t, "#d44a4a"),
    ):
        if not regions:
            continue
        lines.append(f'<g id="{group_id}">')
        for reg in regions:
            pts = reg.flatten(flatten_delta)
            lines.append(
                f'<polygon points="{mapper.poly_str(pts)}" fill="{color}" '
                f'fill-opacity="0.35" stroke="{color}" stroke-width="1"/>'
            )
        lines.append("</g>")
    if result.path is not None:
        pts = result.path.flatten(flatten_delta)
        lines.append('<g id="path">')
        lines.append(
            f'<polyline points="{mapper.poly_str(pts)}" fill="none" '
            'stroke="#7a2ea0" stroke-width="3"/>'
        )
        lines.append("</g>")
    for label, p, color in (("s", instance.s, "#1a7a1a"), ("t", instance.t, "#1a1a7a")):
        x, y = mapper.map(p)
        lines.append(
            f'<circle cx="{_quant(x)}" cy="{_quant(y)}" r="6" fill="{color}"/>'
        )
        lines.append(
            f'<text x="{_quant(x + 10)}" y="{_quant(y - 10)}" font-size="24">{label}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
