"""SVG pictures of (image) Farey tessellations, disk or half-plane model."""

from __future__ import annotations

from typing import Callable, Iterable

import mpmath

from .farey import Edge, FareyVertex
from .geom import INF, to_disk, to_mpf

DISK_BOX = (-1.05, -1.05, 2.1, 2.1)
HALFPLANE_BOX = (-2.5, -3.0, 6.0, 3.05)  # x in [-2.5, 3.5], height up to 3
STROKE = "#1f3b73"
_EPS = 1e-12


def _f(x: float) -> str:
    s = f"{round(x, 6):.6f}"
    return "0.000000" if s == "-0.000000" else s


def _pt(z: complex) -> str:
    # SVG's y axis points down
    return f"{_f(z.real)} {_f(-z.imag)}"


def disk_geodesic(z1: complex, z2: complex) -> str:
    """Path data for the geodesic between two points of the unit circle."""
    if abs(z1 - z2) < _EPS:
        return f"M {_pt(z1)} L {_pt(z2)}"
    denom = 1 + (z1 * z2.conjugate()).real
    if abs(denom) < _EPS:  # diameter
        return f"M {_pt(z1)} L {_pt(z2)}"
    c = (z1 + z2) / denom
    r = abs(z1 - c)
    w1, w2 = z1 - c, z2 - c
    cross = w1.real * w2.imag - w1.imag * w2.real
    sweep = 1 if cross < 0 else 0
    return f"M {_pt(z1)} A {_f(r)} {_f(r)} 0 0 {sweep} {_pt(z2)}"


def halfplane_geodesic(x1, x2, top: float) -> str:
    """Semicircle on the real line, or a vertical ray when one end is inf."""
    if x1 is INF or x2 is INF:
        x = x2 if x1 is INF else x1
        return f"M {_f(x)} 0.000000 L {_f(x)} {_f(-top)}"
    a, b = sorted((x1, x2))
    r = (b - a) / 2
    return f"M {_f(a)} 0.000000 A {_f(r)} {_f(r)} 0 0 1 {_f(b)} 0.000000"


def _svg(box, body: list[str]) -> str:
    x, y, w, h = box
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_f(x)} {_f(y)} {_f(w)} {_f(h)}"'
            f' width="800" height="{int(round(800 * h / w))}">')
    return "\n".join([head, *body, "</svg>"]) + "\n"


def render(edges: Iterable[Edge], image: Callable[[FareyVertex], object],
           model: str = "disk") -> str:
    """One ``<path>`` per edge, drawn between the images of its endpoints."""
    edges = sorted(edges, key=Edge.sort_key)
    with mpmath.workprec(64):
        if model == "disk":
            paths = []
            for e in edges:
                z1, z2 = (complex(to_disk(image(v))) for v in e.endpoints)
                paths.append(f'<path d="{disk_geodesic(z1, z2)}"/>')
            body = ['<circle cx="0" cy="0" r="1" fill="none" stroke="#000000"'
                    ' stroke-width="0.006"/>',
                    f'<g fill="none" stroke="{STROKE}" stroke-width="0.003">', *paths, "</g>"]
            return _svg(DISK_BOX, body)
        if model == "halfplane":
            top = -HALFPLANE_BOX[1]
            paths = []
            for e in edges:
                x1, x2 = (image(v) for v in e.endpoints)
                x1 = x1 if x1 is INF else float(to_mpf(x1))
                x2 = x2 if x2 is INF else float(to_mpf(x2))
                paths.append(f'<path d="{halfplane_geodesic(x1, x2, top)}"/>')
            x0, _, w, _ = HALFPLANE_BOX
            body = [f'<line x1="{_f(x0)}" y1="0.000000" x2="{_f(x0 + w)}" y2="0.000000"'
                    ' stroke="#000000" stroke-width="0.01"/>',
                    f'<g fill="none" stroke="{STROKE}" stroke-width="0.006">', *paths, "</g>"]
            return _svg(HALFPLANE_BOX, body)
    raise ValueError(f"unknown model {model!r}")
