"""Weights of triangle triples: inverse area of a hexagon-like polygon.

Each nonempty proper I of {1,2,3} contributes a half-plane
sum_{i in I} t_i >= -ln|Lambda_I| + ln(eta) in the plane t1 + t2 + t3 = 0,
written in the coordinates (t1, t2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import List, Sequence, Tuple

from .heights import TriangleTriple
from .lattice_core import subset_covolume_sq

BOX_SIDE = 1.0e6
COLLINEAR_TOL = 1e-9
DEFAULT_ETA = 0.5

Point = Tuple[float, float]


@dataclass(frozen=True)
class HalfPlane:
    """a*t1 + b*t2 >= c"""
    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ValueError("half-plane normal must be nonzero")

    def slack(self, p: Point) -> float:
        return self.a * p[0] + self.b * p[1] - self.c


PROPER_SUBSETS = [frozenset(s) for k in (1, 2) for s in combinations((1, 2, 3), k)]


def subset_normal(subset) -> Tuple[int, int]:
    """Coefficients of sum_{i in subset} t_i after substituting t3 = -t1 - t2."""
    a = int(1 in subset) - int(3 in subset)
    b = int(2 in subset) - int(3 in subset)
    return a, b


def omega_constraints(t: TriangleTriple, eta: float = DEFAULT_ETA) -> List[HalfPlane]:
    if eta > 1:
        raise ValueError("weight polytope infeasible by convention")
    if eta <= 0:
        raise ValueError("eta must be positive")
    planes = []
    for subset in PROPER_SUBSETS:
        cov_sq = subset_covolume_sq(t.vectors, [i - 1 for i in subset])
        a, b = subset_normal(subset)
        planes.append(HalfPlane(float(a), float(b), -0.5 * math.log(cov_sq) + math.log(eta)))
    return planes


def _intersect(p: HalfPlane, q: HalfPlane) -> Point | None:
    det = p.a * q.b - p.b * q.a
    if abs(det) < COLLINEAR_TOL * max(1.0, math.hypot(p.a, p.b) * math.hypot(q.a, q.b)):
        return None
    return ((p.c * q.b - p.b * q.c) / det, (p.a * q.c - p.c * q.a) / det)


def _box_planes(side: float) -> List[HalfPlane]:
    h = side / 2
    return [HalfPlane(1.0, 0.0, -h), HalfPlane(0.0, 1.0, -h),
            HalfPlane(-1.0, 0.0, -h), HalfPlane(0.0, -1.0, -h)]


def clip_polygon(planes: Sequence[HalfPlane], side: float = BOX_SIDE) -> List[Point]:
    """Counter-clockwise vertices of the clipped box.

    Each edge remembers the line that produced it; the final vertices are
    recomputed as intersections of adjacent edge lines so that the large
    box does not leak rounding error into small polygons.
    """
    box = _box_planes(side)
    h = side / 2
    verts = [(-h, -h), (h, -h), (h, h), (-h, h)]
    # edge i runs from verts[i] to verts[i+1] and lies on lines[i]
    lines = [box[1], box[0], box[3], box[2]]
    for plane in planes:
        if not verts:
            break
        new_verts: List[Point] = []
        new_lines: List[HalfPlane] = []
        n = len(verts)
        for i in range(n):
            p, q = verts[i], verts[(i + 1) % n]
            sp, sq = plane.slack(p), plane.slack(q)
            if sp >= 0:
                new_verts.append(p)
                new_lines.append(lines[i])
                if sq < 0:
                    x = _segment_cut(p, q, sp, sq)
                    new_verts.append(x)
                    new_lines.append(plane)
            elif sq >= 0:
                x = _segment_cut(p, q, sp, sq)
                new_verts.append(x)
                new_lines.append(lines[i])
        verts, lines = _drop_degenerate(new_verts, new_lines)
    if len(verts) < 3:
        return []
    refined = []
    n = len(verts)
    for i in range(n):
        x = _intersect(lines[i - 1], lines[i])
        refined.append(x if x is not None else verts[i])
    return refined


def _segment_cut(p: Point, q: Point, sp: float, sq: float) -> Point:
    s = sp / (sp - sq)
    return (p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1]))


def _drop_degenerate(verts: List[Point], lines: List[HalfPlane]):
    """Remove repeated vertices and vertices between collinear edges."""
    changed = True
    while changed and len(verts) >= 3:
        changed = False
        n = len(verts)
        for i in range(n):
            p, q, r = verts[i - 1], verts[i], verts[(i + 1) % n]
            scale = max(1.0, abs(p[0]), abs(p[1]), abs(q[0]), abs(q[1]))
            e1 = (q[0] - p[0], q[1] - p[1])
            e2 = (r[0] - q[0], r[1] - q[1])
            same = math.hypot(*e1) <= COLLINEAR_TOL * scale
            turn = e1[0] * e2[1] - e1[1] * e2[0]
            # sine of the turning angle below tolerance counts as collinear
            if same or abs(turn) <= COLLINEAR_TOL * math.hypot(*e1) * math.hypot(*e2):
                # vertex i joins edge i-1 and edge i; keep the longer-lived line
                del verts[i]
                keep = lines[i - 1] if not same else lines[i]
                del lines[i]
                lines[i - 1 if i > 0 else -1] = keep
                changed = True
                break
    if len(verts) < 3:
        return [], []
    return verts, lines


def shoelace(verts: Sequence[Point]) -> float:
    n = len(verts)
    s = 0.0
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def polygon_area(planes: Sequence[HalfPlane], side: float = BOX_SIDE) -> float:
    verts = clip_polygon(planes, side)
    return shoelace(verts) if verts else 0.0


def omega_polygon(t: TriangleTriple, eta: float = DEFAULT_ETA) -> List[Point]:
    return clip_polygon(omega_constraints(t, eta))


def weight(t: TriangleTriple, eta: float = DEFAULT_ETA) -> float:
    area = polygon_area(omega_constraints(t, eta))
    if area <= 0:
        return 1.0
    return min(1.0 / area, 1.0)
