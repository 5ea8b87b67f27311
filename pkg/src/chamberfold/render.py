"""SVG cross-sections of tile fans for rank 2 and rank 3 spherical groups.

Rank 3: the fan is cut by the plane ``c . x = level`` (default ``c = (1,1,1)``,
``level = 1``), which meets the dual cone in a triangle; barycentric
coordinates on that triangle are drawn on an equilateral triangle.  Rank 2:
the dual cone truncated by ``x_1 + x_2 <= 1`` is drawn directly, with the
origin marked.  Every drawn shape carries ``data-word`` so the file can be
read back and checked.
"""
from __future__ import annotations

import math
import random
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .coxeter import ReflectionGroup, one_minus, rank_one_minus
from .errors import PreconditionViolated
from .structure import fundamental_coweights

SVG_NS = "http://www.w3.org/2000/svg"
_TRIANGLE = ((0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2))


@dataclass(frozen=True)
class SectionRenderSpec:
    plane: tuple | None = None  # (coefficients, level)
    viewport: tuple | None = None  # (xmin, ymin, xmax, ymax) in section units
    labels: bool = True
    region: str = "dual-cone-fan"


@dataclass
class Section:
    """Shapes of one section, in 2D section coordinates."""

    rank: int
    polygons: list = field(default_factory=list)  # (word, [(x, y), ...])
    segments: list = field(default_factory=list)  # (word, (p, q))
    points: list = field(default_factory=list)  # (word, p)
    outline: list = field(default_factory=list)


class SectionMap:
    """Maps between Pi-coordinates on the slice and 2D drawing coordinates."""

    def __init__(self, rank: int, plane=None):
        self.rank = rank
        if rank == 3:
            coeffs, level = plane if plane is not None else ((1, 1, 1), 1)
            coeffs = tuple(Fraction(c) for c in coeffs)
            level = Fraction(level)
            if any(c <= 0 for c in coeffs) or level <= 0:
                raise PreconditionViolated("slice plane needs positive coefficients and level")
            self.coeffs, self.level = coeffs, level
        elif plane is not None:
            raise PreconditionViolated("rank 2 sections are drawn in the plane itself")

    def project(self, x):
        """Ray through ``x`` (in the dual cone) to its 2D drawing point."""
        if self.rank == 2:
            return float(x[0]) + 0.5 * float(x[1]), math.sqrt(3) / 2 * float(x[1])
        t = sum(float(c) * float(a) for c, a in zip(self.coeffs, x))
        lam = [float(c) * float(a) / t for c, a in zip(self.coeffs, x)]
        return (sum(l * v[0] for l, v in zip(lam, _TRIANGLE)),
                sum(l * v[1] for l, v in zip(lam, _TRIANGLE)))

    def lift(self, p):
        """2D drawing point back to Pi-coordinates (exact rationals)."""
        px, py = Fraction(p[0]), Fraction(p[1])
        if self.rank == 2:
            # inverse of x -> (x0 + x1/2, sqrt3/2 x1), with sqrt3 handled in float
            x1 = Fraction(float(py) * 2 / math.sqrt(3))
            return (px - x1 / 2, x1)
        (ax, ay), (bx, by), (cx, cy) = _TRIANGLE
        l2 = Fraction(float(py) / cy)
        l1 = px - l2 * Fraction(cx)
        l0 = 1 - l1 - l2
        return tuple(l * self.level / c for l, c in zip((l0, l1, l2), self.coeffs))


def _check_group(G: ReflectionGroup):
    if G.geometry != "spherical" or G.rank not in (2, 3):
        raise PreconditionViolated("sections are drawn for spherical groups of rank 2 or 3")


def compute_section(G: ReflectionGroup, spec: SectionRenderSpec = SectionRenderSpec()) -> Section:
    _check_group(G)
    smap = SectionMap(G.rank, spec.plane)
    pis = fundamental_coweights(G)
    sec = Section(G.rank)
    if spec.region == "chamber-fan":
        return _chamber_section(G, smap, pis, sec)
    if spec.region != "dual-cone-fan":
        raise PreconditionViolated(f"unknown region {spec.region!r}")
    b = G.backend
    for w in G.elements():
        r = rank_one_minus(G, w)
        rays = [la.mat_vec(one_minus(G, w), p) for p in pis]
        rays = [v for v in rays if not all(b.is_zero(c) for c in v)]
        if G.rank == 2:
            rays = [la.scale(1 / sum(v), v) for v in rays]
            origin = (0.0, 0.0)
            if r == 2:
                sec.polygons.append((w.word, [origin] + [smap.project(v) for v in rays]))
            elif r == 1:
                sec.segments.append((w.word, (origin, smap.project(rays[0]))))
            else:
                sec.points.append((w.word, origin))
            continue
        pts = [smap.project(v) for v in rays]
        if r == 3:
            sec.polygons.append((w.word, _ccw(pts)))
        elif r == 2:
            p, q = max(((p, q) for p in pts for q in pts), key=lambda pq: _dist(*pq))
            sec.segments.append((w.word, (p, q)))
        elif r == 1:
            sec.points.append((w.word, pts[0]))
    if G.rank == 2:
        sec.outline = [(0.0, 0.0), smap.project((1, 0)), smap.project((0, 1))]
    else:
        sec.outline = list(_TRIANGLE)
    return sec


def _chamber_section(G, smap, pis, sec):
    """Chambers ``wC`` whose whole section is bounded (all rays on the positive side)."""
    for w in G.elements():
        rays = [w.apply_linear(p) for p in pis]
        if G.rank == 3:
            if all(sum(float(c) * float(a) for c, a in zip(smap.coeffs, v)) > 0 for v in rays):
                sec.polygons.append((w.word, _ccw([smap.project(v) for v in rays])))
        else:
            pts = [_planar(G, v) for v in rays]
            sec.polygons.append((w.word, [(0.0, 0.0)] + pts))
    return sec


def _planar(G, v):
    """Rank 2 chamber-fan picture in true angles, rays scaled to unit length."""
    import numpy as np

    L = np.linalg.cholesky(np.array(G.gram, dtype=float))
    y = L.T @ np.array([float(a) for a in v])
    y = y / np.linalg.norm(y)
    return float(y[0]), float(y[1])


def _dist(p, q):
    return math.hypot(p[0] - q[0], p[1] - q[1])


def _ccw(pts):
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    return sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def polygon_area(pts) -> float:
    s = 0.0
    for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


# -- SVG --------------------------------------------------------------------


def _word_str(word):
    return ",".join(str(i) for i in word)


def _label(word):
    return "1" if not word else "".join(f"s{i}" for i in word)


def _pts(points):
    return " ".join(f"{x:.6f},{y:.6f}" for x, y in points)


def to_svg(sec: Section, spec: SectionRenderSpec = SectionRenderSpec(), title: str = "") -> str:
    allpts = list(sec.outline) + [p for _, poly in sec.polygons for p in poly]
    if spec.viewport is not None:
        xmin, ymin, xmax, ymax = spec.viewport
    else:
        xmin = min(p[0] for p in allpts)
        xmax = max(p[0] for p in allpts)
        ymin = min(p[1] for p in allpts)
        ymax = max(p[1] for p in allpts)
        pad = 0.05 * max(xmax - xmin, ymax - ymin)
        xmin, xmax, ymin, ymax = xmin - pad, xmax + pad, ymin - pad, ymax + pad
    w, h = xmax - xmin, ymax - ymin
    px = 600
    stroke = 0.002 * max(w, h)
    svg = ET.Element("svg", {
        "xmlns": SVG_NS, "version": "1.1",
        "width": str(px), "height": str(round(px * h / w)),
        "viewBox": f"{xmin:.6f} {-ymax:.6f} {w:.6f} {h:.6f}",
    })
    if title:
        ET.SubElement(svg, "title").text = title
    ET.SubElement(svg, "defs")
    g = ET.SubElement(svg, "g", {"transform": "scale(1,-1)", "id": "section"})
    if sec.outline:
        ET.SubElement(g, "polygon", {"class": "outline", "points": _pts(sec.outline), "fill": "none",
                                     "stroke": "#999", "stroke-width": f"{stroke:.6f}"})
    for i, (word, poly) in enumerate(sec.polygons):
        hue = (i * 137) % 360
        el = ET.SubElement(g, "polygon", {
            "class": "tile", "data-word": _word_str(word), "points": _pts(poly),
            "fill": f"hsl({hue},60%,75%)", "stroke": "#333", "stroke-width": f"{stroke:.6f}",
        })
        ET.SubElement(el, "title").text = _label(word)
    for word, (p, q) in sec.segments:
        el = ET.SubElement(g, "line", {
            "class": "tile-segment", "data-word": _word_str(word),
            "x1": f"{p[0]:.6f}", "y1": f"{p[1]:.6f}", "x2": f"{q[0]:.6f}", "y2": f"{q[1]:.6f}",
            "stroke": "#c00", "stroke-width": f"{2 * stroke:.6f}",
        })
        ET.SubElement(el, "title").text = _label(word)
    for word, p in sec.points:
        el = ET.SubElement(g, "circle", {
            "class": "tile-point", "data-word": _word_str(word),
            "cx": f"{p[0]:.6f}", "cy": f"{p[1]:.6f}", "r": f"{4 * stroke:.6f}", "fill": "#000",
        })
        ET.SubElement(el, "title").text = _label(word)
    if spec.labels:
        fs = 0.03 * max(w, h)
        for word, poly in sec.polygons:
            cx = sum(p[0] for p in poly) / len(poly)
            cy = sum(p[1] for p in poly) / len(poly)
            ET.SubElement(svg, "text", {
                "x": f"{cx:.6f}", "y": f"{-cy:.6f}", "font-size": f"{fs:.6f}",
                "text-anchor": "middle", "class": "label",
            }).text = _label(word)
    ET.indent(svg)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"


def render_section(G: ReflectionGroup, path, spec: SectionRenderSpec = SectionRenderSpec()) -> Section:
    sec = compute_section(G, spec)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_svg(sec, spec, title=f"{G.name} {spec.region}"))
    return sec


def read_section_svg(path) -> Section:
    """Parse the tile shapes back out of a rendered file."""
    root = ET.parse(path).getroot()
    ns = {"s": SVG_NS}
    sec = Section(0)

    def word(el):
        raw = el.get("data-word")
        return tuple(int(x) for x in raw.split(",")) if raw else ()

    def parse_pts(raw):
        return [tuple(float(c) for c in p.split(",")) for p in raw.split()]

    for el in root.iterfind(".//s:polygon", ns):
        if el.get("class") == "tile":
            sec.polygons.append((word(el), parse_pts(el.get("points"))))
        elif el.get("class") == "outline":
            sec.outline = parse_pts(el.get("points"))
    for el in root.iterfind(".//s:line", ns):
        p = (float(el.get("x1")), float(el.get("y1")))
        q = (float(el.get("x2")), float(el.get("y2")))
        sec.segments.append((word(el), (p, q)))
    for el in root.iterfind(".//s:circle", ns):
        sec.points.append((word(el), (float(el.get("cx")), float(el.get("cy")))))
    return sec


# -- cross-check ------------------------------------------------------------------


def _inside(pt, poly) -> bool:
    x, y = pt
    inside = False
    for (x0, y0), (x1, y1) in zip(poly, poly[1:] + poly[:1]):
        if (y0 > y) != (y1 > y) and x < x0 + (y - y0) * (x1 - x0) / (y1 - y0):
            inside = not inside
    return inside


def _edge_distance(pt, poly) -> float:
    best = math.inf
    for p, q in zip(poly, poly[1:] + poly[:1]):
        dx, dy = q[0] - p[0], q[1] - p[1]
        L = dx * dx + dy * dy
        t = 0.0 if L == 0 else max(0.0, min(1.0, ((pt[0] - p[0]) * dx + (pt[1] - p[1]) * dy) / L))
        best = min(best, math.hypot(pt[0] - p[0] - t * dx, pt[1] - p[1] - t * dy))
    return best


def label_crosscheck(G: ReflectionGroup, path, samples: int = 500, seed: int = 0,
                     spec: SectionRenderSpec = SectionRenderSpec(), guard: float = 1e-5) -> dict:
    """Compare the polygon under random section points with :func:`solve_spherical`.

    Points closer than ``guard`` to a drawn edge are redrawn, since the file
    stores coordinates to 6 decimals.
    """
    from .solver import solve_spherical

    sec = read_section_svg(path)
    smap = SectionMap(G.rank, spec.plane)
    outline = sec.outline
    rng = random.Random(seed)
    xs = [p[0] for p in outline]
    ys = [p[1] for p in outline]
    mismatches, skipped, checked = [], 0, 0
    while checked < samples:
        pt = (rng.uniform(min(xs), max(xs)), rng.uniform(min(ys), max(ys)))
        if not _inside(pt, outline) or _edge_distance(pt, outline) < guard:
            continue
        if any(_edge_distance(pt, poly) < guard for _, poly in sec.polygons):
            skipped += 1
            continue
        hits = [w for w, poly in sec.polygons if _inside(pt, poly)]
        u = smap.lift(pt)
        solved = solve_spherical(G, u).element.word
        checked += 1
        if hits != [solved]:
            mismatches.append({"point": list(pt), "drawn": [list(h) for h in hits], "solver": list(solved)})
    return {"checked": checked, "mismatches": mismatches, "skipped_near_edges": skipped,
            "polygons": len(sec.polygons)}
