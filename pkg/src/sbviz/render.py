"""Deterministic SVG output for a :class:`~sbviz.layout.LayoutModel`."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional
from xml.sax.saxutils import escape, quoteattr

from .layout import (
    EDGE_CLASSES,
    NEGATIVE_EXTERNAL,
    NEGATIVE_INTERNAL,
    POSITIVE_EXTERNAL,
    POSITIVE_INTERNAL,
    LayoutModel,
)
from .sgraph import SignedGraph

_HEX = re.compile(r"^#[0-9a-fA-F]{6}$")
_CLASS_ORDER = {c: i for i, c in enumerate(EDGE_CLASSES)}

NODE_FILL = "#7f7f7f"
AXIS_COLOR = "#333333"
MAX_ROW_STEP = 24.0


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class RenderSpec:
    width: float = 900
    height: float = 600
    margin: float = 40
    node_radius: float = 5
    color_positive: str = "#1f77b4"
    color_negative: str = "#d62728"
    bundling: bool = False
    bundle_strength: float = 0.35
    max_tilt_degrees: float = 15.0
    show_lambda_label: bool = True

    def __post_init__(self) -> None:
        if self.width <= 2 * self.margin or self.height <= 2 * self.margin:
            raise RenderError("canvas must be larger than twice the margin")
        if self.margin < 0 or self.node_radius < 0:
            raise RenderError("margin and node_radius must be non-negative")
        for name in ("color_positive", "color_negative"):
            if not _HEX.match(getattr(self, name)):
                raise RenderError(f"{name} must look like #rrggbb")
        if not 0.0 <= self.bundle_strength <= 1.0:
            raise RenderError("bundle_strength must lie in [0, 1]")
        if not 0.0 <= self.max_tilt_degrees < 90.0:
            raise RenderError("max_tilt_degrees must lie in [0, 90)")


def _num(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def tilt_degrees(layout: LayoutModel, max_tilt: float) -> float:
    """Axis tilt for gamma: arctan-scaled, reaching ``max_tilt`` when
    |gamma| equals the larger of the two faction measures. Positive gamma
    (heavier left faction) lowers the left end."""
    if layout.gamma is None or layout.gamma == 0:
        return 0.0
    ref = max(abs(layout.mu_left or 0.0), abs(layout.mu_right or 0.0))
    if ref == 0:
        return 0.0
    angle = max_tilt * math.atan(abs(layout.gamma) / ref) / math.atan(1.0)
    return math.copysign(min(angle, max_tilt), layout.gamma)


@dataclass(frozen=True)
class Geometry:
    """Pixel mapping shared by the renderer and its tests."""

    spec: RenderSpec
    x_scale: float
    axis_y: float
    row_step: float

    @classmethod
    def for_layout(cls, layout: LayoutModel, spec: RenderSpec) -> "Geometry":
        xmax = max((abs(v) for v in layout.x), default=0.0) or 1.0
        half = spec.width / 2 - spec.margin
        inner = spec.height - 2 * spec.margin
        axis_y = spec.margin + 0.75 * inner
        tallest = max(layout.y, default=0)
        room = axis_y - spec.margin - spec.node_radius
        row_step = min(MAX_ROW_STEP, room / tallest) if tallest else MAX_ROW_STEP
        return cls(spec, half / xmax, axis_y, row_step)

    @property
    def origin_x(self) -> float:
        return self.spec.width / 2

    def node(self, layout: LayoutModel, u: int) -> tuple[float, float]:
        return (
            self.origin_x + layout.x[u] * self.x_scale,
            self.axis_y - layout.y[u] * self.row_step,
        )

    def clamp(self, x: float, y: float) -> tuple[float, float]:
        return min(max(x, 0.0), self.spec.width), min(max(y, 0.0), self.spec.height)


def control_point(geo: Geometry, cls: str, p: tuple[float, float], q: tuple[float, float]):
    """Quadratic control point for one bundled edge."""
    mx, my = (p[0] + q[0]) / 2, (p[1] + q[1]) / 2
    d = geo.spec.bundle_strength * math.hypot(q[0] - p[0], q[1] - p[1])
    outward = 1.0 if mx >= geo.origin_x else -1.0
    if cls == POSITIVE_EXTERNAL:
        c = (mx, my - d)
    elif cls == NEGATIVE_EXTERNAL:
        c = (mx, my + d)
    elif cls == POSITIVE_INTERNAL:
        c = (mx + outward * d, my)
    elif cls == NEGATIVE_INTERNAL:
        c = (mx - outward * d, my)
    else:
        raise RenderError(f"unknown edge class {cls!r}")
    return geo.clamp(*c)


def _axis_x(geo: Geometry, angle_deg: float) -> tuple[float, float, float, float]:
    spec = geo.spec
    length = spec.width / 2 - spec.margin / 2
    theta = math.radians(angle_deg)
    if theta:
        room = min(geo.axis_y, spec.height - geo.axis_y)
        length = min(length, room / abs(math.sin(theta)))
    dx, dy = length * math.cos(theta), length * math.sin(theta)
    ox = geo.origin_x
    return ox - dx, geo.axis_y + dy, ox + dx, geo.axis_y - dy


def check_consistent(layout: LayoutModel, g: SignedGraph) -> None:
    if layout.node_count != g.node_count:
        raise RenderError(f"layout has {layout.node_count} nodes, graph has {g.node_count}")
    if len(layout.edge_class) != g.edge_count:
        raise RenderError(
            f"layout has {len(layout.edge_class)} edges, graph has {g.edge_count}"
        )
    if len(layout.y) != layout.node_count:
        raise RenderError("layout x and y lengths differ")
    for (_, _, s), cls in zip(g.edges, layout.edge_class):
        if cls not in _CLASS_ORDER:
            raise RenderError(f"unknown edge class {cls!r}")
        if (s > 0) != cls.startswith("positive"):
            raise RenderError("edge class sign disagrees with the graph")


def render_svg(layout: LayoutModel, g: SignedGraph, spec: Optional[RenderSpec] = None) -> str:
    """Standalone SVG 1.1 document.

    Element order is fixed (axes, edges by class then index, nodes, labels)
    and every coordinate is printed with two decimals, so equal inputs give
    equal bytes.
    """
    spec = spec or RenderSpec()
    check_consistent(layout, g)
    geo = Geometry.for_layout(layout, spec)
    W, H = spec.width, spec.height
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(W)}" '
        f'height="{_num(H)}" viewBox="0 0 {_num(W)} {_num(H)}">',
        f'<rect x="0.00" y="0.00" width="{_num(W)}" height="{_num(H)}" fill="#ffffff"/>',
    ]

    angle = tilt_degrees(layout, spec.max_tilt_degrees)
    x1, y1, x2, y2 = _axis_x(geo, angle)
    out.append('<g id="axes">')
    out.append(
        f'<line id="axis-x" x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" y2="{_num(y2)}" '
        f'stroke="{AXIS_COLOR}" stroke-width="1.5"/>'
    )
    ox = geo.origin_x
    out.append(
        f'<line id="axis-y" x1="{_num(ox)}" y1="{_num(spec.margin)}" x2="{_num(ox)}" '
        f'y2="{_num(H - spec.margin)}" stroke="{AXIS_COLOR}" stroke-width="1.5"/>'
    )
    out.append("</g>")

    out.append('<g id="edges" fill="none" stroke-width="1" stroke-opacity="0.8">')
    order = sorted(range(g.edge_count), key=lambda i: (_CLASS_ORDER[layout.edge_class[i]], i))
    for i in order:
        u, v, s = g.edges[i]
        cls = layout.edge_class[i]
        color = spec.color_positive if s > 0 else spec.color_negative
        p, q = geo.node(layout, u), geo.node(layout, v)
        if spec.bundling:
            c = control_point(geo, cls, p, q)
            out.append(
                f'<path id="edge-{i}" class="{cls}" d="M {_num(p[0])} {_num(p[1])} '
                f'Q {_num(c[0])} {_num(c[1])} {_num(q[0])} {_num(q[1])}" stroke="{color}"/>'
            )
        else:
            out.append(
                f'<line id="edge-{i}" class="{cls}" x1="{_num(p[0])}" y1="{_num(p[1])}" '
                f'x2="{_num(q[0])}" y2="{_num(q[1])}" stroke="{color}"/>'
            )
    out.append("</g>")

    out.append(f'<g id="nodes" fill="{NODE_FILL}" stroke="#ffffff" stroke-width="0.5">')
    for u in range(g.node_count):
        x, y = geo.node(layout, u)
        title = f"<title>{escape(g.label(u))}</title>"
        out.append(
            f'<circle id="node-{u}" cx="{_num(x)}" cy="{_num(y)}" r="{_num(spec.node_radius)}">'
            f"{title}</circle>"
        )
    out.append("</g>")

    font = 'font-family="sans-serif" font-size="12" fill="#333333"'
    if layout.mu_name is not None:
        for side, value, x, anchor in (
            ("left", layout.mu_left, min(x1, x2), "start"),
            ("right", layout.mu_right, max(x1, x2), "end"),
        ):
            text = escape(f"{layout.mu_name} = {value:.4g}")
            ty = H - spec.margin / 2
            out.append(
                f'<text id="mu-{side}" x="{_num(x)}" y="{_num(ty)}" text-anchor="{anchor}" '
                f"{font}>{text}</text>"
            )
    if spec.show_lambda_label:
        label = quoteattr(f"{layout.lambda_label:#.4g}")
        text = escape(f"y = {layout.lambda_label:#.4g}")
        out.append(
            f'<text id="lambda-label" x="{_num(ox)}" y="{_num(spec.margin * 0.6)}" '
            f'text-anchor="middle" data-lambda={label} {font}>{text}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
