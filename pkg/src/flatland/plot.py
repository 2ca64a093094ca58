"""SVG pictures of real plane curves in the affine chart z = 1."""

from dataclasses import dataclass, field

import numpy as np
from skimage.measure import find_contours

from .errors import EmptyWindow
from .linalg import to_float
from .projective import _coords

DEFAULT_SIZE = 512
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass
class Window:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    size: int = DEFAULT_SIZE

    def __post_init__(self):
        vals = [self.xmin, self.xmax, self.ymin, self.ymax]
        if not all(np.isfinite(vals)) or self.xmax <= self.xmin or self.ymax <= self.ymin or self.size < 2:
            raise EmptyWindow(f"degenerate window {vals} at size {self.size}")

    def to_pixel(self, x, y):
        """(column, row) of a chart point; rows grow downward."""
        c = (x - self.xmin) / (self.xmax - self.xmin) * (self.size - 1)
        r = (self.ymax - y) / (self.ymax - self.ymin) * (self.size - 1)
        return c, r

    def contains(self, x, y):
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax


def affine(p, tol=1e-9):
    """Chart coordinates (x, y) of a real point with z != 0, else None."""
    v = to_float(_coords(p)).astype(complex)
    if abs(v[2]) <= tol * np.max(np.abs(v)):
        return None
    x, y = v[0] / v[2], v[1] / v[2]
    if abs(x.imag) > tol * (1 + abs(x)) or abs(y.imag) > tol * (1 + abs(y)):
        return None
    return float(x.real), float(y.real)


def curve_branches(form, window):
    """Polylines (in pixel coordinates) of the real zero set of a ternary form."""
    xs = np.linspace(window.xmin, window.xmax, window.size)
    ys = np.linspace(window.ymax, window.ymin, window.size)
    gx, gy = np.meshgrid(xs, ys)
    f = form.to_float() if hasattr(form, "to_float") else form
    vals = np.zeros_like(gx)
    for e, c in f.terms.items():
        vals = vals + complex(c).real * gx ** e[0] * gy ** e[1]
    scale = np.max(np.abs(vals))
    if scale == 0:
        return []
    # contours come back as (row, col) arrays
    return [np.column_stack([c[:, 1], c[:, 0]]) for c in find_contours(vals / scale, 0.0)]


@dataclass
class Picture:
    window: Window
    curves: list = field(default_factory=list)     # (label, form)
    points: list = field(default_factory=list)     # (label, point) data points
    markers: list = field(default_factory=list)    # (label, point) solutions / centers

    def svg(self):
        w = self.window
        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w.size}" height="{w.size}" '
               f'viewBox="0 0 {w.size} {w.size}">',
               f'<rect x="0" y="0" width="{w.size}" height="{w.size}" fill="white"/>']
        for k, (label, form) in enumerate(self.curves):
            color = COLORS[k % len(COLORS)]
            out.append(f'<g class="curve" id="{label}" stroke="{color}" fill="none" stroke-width="1.5">')
            for branch in curve_branches(form, w):
                pts = " ".join(f"{c:.2f},{r:.2f}" for c, r in branch)
                out.append(f'<polyline points="{pts}"/>')
            out.append("</g>")
        for cls, items, radius, fill in (("data", self.points, 4, "black"), ("center", self.markers, 6, "none")):
            for label, p in items:
                xy = affine(p)
                if xy is None or not w.contains(*xy):
                    continue
                c, r = w.to_pixel(*xy)
                stroke = ' stroke="#d62728" stroke-width="2"' if cls == "center" else ""
                out.append(f'<circle class="{cls}" id="{label}" cx="{c:.2f}" cy="{r:.2f}" r="{radius}" '
                           f'fill="{fill}"{stroke}/>')
        out.append("</svg>")
        return "\n".join(out) + "\n"
