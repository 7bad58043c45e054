"""Primitive types and exact predicates.

Points, triangles, edges and non-vertical lines over exact rationals,
plus the handful of predicates everything else is built from.  All
functions here are pure; all types are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .eps import Eps, EpsPoint2
from .errors import DegenerateTriangleError, PreconditionError
from .rational import rat


@dataclass(frozen=True, slots=True)
class Point2:
    x: object
    y: object

    def __repr__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True, slots=True)
class Point3:
    x: object
    y: object
    z: object

    def __repr__(self):
        return f"({self.x}, {self.y}, {self.z})"

    def project(self) -> Point2:
        return Point2(self.x, self.y)


def p2(x, y) -> Point2:
    return Point2(rat(x), rat(y))


def p3(x, y, z) -> Point3:
    return Point3(rat(x), rat(y), rat(z))


def orient2d(a: Point2, b: Point2, c: Point2) -> int:
    """Sign of the signed area of (a, b, c): +1 ccw, -1 cw, 0 collinear."""
    det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def orient2d_eps(a: Point2, b: Point2, q: EpsPoint2) -> int:
    """orient2d with a perturbed third point; exact jet sign."""
    det = (b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x)
    return det.sign()


@dataclass(frozen=True, slots=True)
class Line2:
    """Non-vertical line y = m*x + k (trapezoid tops/bottoms, gap bounds)."""

    m: object
    k: object

    @staticmethod
    def through(a: Point2, b: Point2) -> "Line2":
        if a.x == b.x:
            raise PreconditionError(f"vertical line through {a} and {b}")
        m = (b.y - a.y) / (b.x - a.x)
        return Line2(m, a.y - m * a.x)

    @staticmethod
    def horizontal(y) -> "Line2":
        return Line2(rat(0), rat(y))

    def y_at(self, x):
        """Exact y at abscissa x; x may be a rational or an Eps jet."""
        return self.m * x + self.k

    def __repr__(self):
        return f"Line2(y = {self.m}*x + {self.k})"


def line_y_at(line: Line2, x):
    return line.y_at(x)


class Edge3:
    """One triangle edge with its projection precomputed."""

    __slots__ = (
        "owner", "index", "a", "b", "pa", "pb",
        "xmin", "xmax", "vertical", "line",
    )

    def __init__(self, owner: int, index: int, a: Point3, b: Point3):
        if (a.x, a.y, a.z) == (b.x, b.y, b.z):
            raise DegenerateTriangleError(f"zero-length edge on triangle {owner}")
        self.owner = owner
        self.index = index
        self.a = a
        self.b = b
        # orient projection left-to-right (or bottom-to-top when vertical)
        pa, pb = a.project(), b.project()
        if (pa.x, pa.y) > (pb.x, pb.y):
            pa, pb = pb, pa
            a, b = b, a
        self.pa = pa
        self.pb = pb
        self.a = a
        self.b = b
        self.xmin = pa.x
        self.xmax = pb.x
        self.vertical = pa.x == pb.x
        self.line = None if self.vertical else Line2.through(pa, pb)

    def y_at(self, x):
        """Projected y at abscissa x (non-vertical edges; x rational or Eps)."""
        return self.line.y_at(x)

    def z_at_x(self, x):
        """z along the edge at abscissa x (non-vertical edges)."""
        t = (x - self.pa.x) / (self.xmax - self.xmin)
        return self.a.z + t * (self.b.z - self.a.z)

    def z_at_y(self, y):
        """z along the edge at ordinate y (vertical-projection edges)."""
        if self.pa.y == self.pb.y:
            raise PreconditionError("point-projection edge has no y parameter")
        t = (y - self.pa.y) / (self.pb.y - self.pa.y)
        return self.a.z + t * (self.b.z - self.a.z)

    def __repr__(self):
        return f"Edge3(t{self.owner}e{self.index}: {self.a}->{self.b})"


@dataclass(frozen=True)
class EdgeCrossing:
    """Result of edge_crossing_y: point crossing, or a vertical edge's span."""

    y: object
    z: object
    y2: object = None
    z2: object = None
    vertical: bool = False


class Triangle:
    """A scene triangle: id, vertices, plane and projection, all immutable.

    The supporting plane must not be parallel to the z-axis, which is
    equivalent to the projection being non-collinear; the constructor
    rejects anything else.
    """

    __slots__ = ("id", "vertices", "proj", "proj_ccw", "edges", "px", "py", "pc",
                 "zmin", "zmax")

    def __init__(self, tid: int, v0: Point3, v1: Point3, v2: Point3):
        self.id = tid
        self.vertices = (v0, v1, v2)
        proj = (v0.project(), v1.project(), v2.project())
        sign = orient2d(*proj)
        if sign == 0:
            raise DegenerateTriangleError(
                f"triangle {tid} has a collinear projection (z-parallel plane)"
            )
        self.proj = proj
        self.proj_ccw = proj if sign > 0 else (proj[0], proj[2], proj[1])
        self.edges = (
            Edge3(tid, 0, v0, v1),
            Edge3(tid, 1, v1, v2),
            Edge3(tid, 2, v2, v0),
        )
        # plane z = pc + px*x + py*y via the normal of (v1-v0)x(v2-v0)
        ux, uy, uz = v1.x - v0.x, v1.y - v0.y, v1.z - v0.z
        wx, wy, wz = v2.x - v0.x, v2.y - v0.y, v2.z - v0.z
        nx = uy * wz - uz * wy
        ny = uz * wx - ux * wz
        nz = ux * wy - uy * wx
        # nz == 0 iff projection degenerate; already rejected
        self.px = -nx / nz
        self.py = -ny / nz
        self.pc = (nx * v0.x + ny * v0.y + nz * v0.z) / nz
        zs = (v0.z, v1.z, v2.z)
        self.zmin = min(zs)
        self.zmax = max(zs)

    def plane_z(self, x, y):
        """Exact plane height above (x, y); accepts rationals or Eps jets."""
        return self.pc + self.px * x + self.py * y

    def __repr__(self):
        return f"Triangle({self.id}, {self.vertices})"


def point_in_projected_triangle(q: Point2, t: Triangle) -> str:
    """Classify q against the closed xy-projection: inside/boundary/outside."""
    a, b, c = t.proj_ccw
    s1 = orient2d(a, b, q)
    s2 = orient2d(b, c, q)
    s3 = orient2d(c, a, q)
    if s1 < 0 or s2 < 0 or s3 < 0:
        return "outside"
    if s1 == 0 or s2 == 0 or s3 == 0:
        return "boundary"
    return "inside"


def point_in_projected_triangle_eps(q: EpsPoint2, t: Triangle) -> bool:
    """Strict containment of a perturbed point (never lands on boundary)."""
    a, b, c = t.proj_ccw
    if orient2d_eps(a, b, q) <= 0:
        return False
    if orient2d_eps(b, c, q) <= 0:
        return False
    return orient2d_eps(c, a, q) > 0


def z_at(t: Triangle, q: Point2):
    """Plane height of t above q; q must be in the closed projection."""
    if point_in_projected_triangle(q, t) == "outside":
        raise PreconditionError(f"{q} is outside the projection of triangle {t.id}")
    return t.plane_z(q.x, q.y)


def edge_crossing_y(e: Edge3, x) -> Optional[EdgeCrossing]:
    """Where the vertical line at abscissa x meets edge e's projection.

    Non-vertical edges report the (y, z) of the single crossing when x is
    within the closed x-span; vertical-projection edges report their full
    (y, z) span when x equals their abscissa; otherwise None.
    """
    x = rat(x)
    if e.vertical:
        if x != e.xmin:
            return None
        return EdgeCrossing(
            y=e.pa.y, z=e.a.z, y2=e.pb.y, z2=e.b.z, vertical=True
        )
    if not (e.xmin <= x <= e.xmax):
        return None
    return EdgeCrossing(y=e.y_at(x), z=e.z_at_x(x))


def edge_crossing_at_eps(e: Edge3, x: Eps):
    """(y, z) jets where the perturbed column meets e, or None.

    The perturbed column x + eps^2 never meets a vertical-projection edge.
    """
    if e.vertical:
        return None
    if not (e.xmin <= x and x <= e.xmax):
        return None
    t = (x - e.pa.x) * (rat(1) / (e.xmax - e.xmin))
    y = e.pa.y + t * (e.pb.y - e.pa.y)
    z = e.a.z + t * (e.b.z - e.a.z)
    return (y, z)


def segment_intersections(p1: Point2, p2_: Point2, p3: Point2, p4: Point2):
    """All shared points of segments [p1,p2] and [p3,p4].

    Returns a list of Point2: empty, a single proper/touching point, or the
    two endpoints of a collinear overlap (possibly equal).
    """
    d1 = orient2d(p3, p4, p1)
    d2 = orient2d(p3, p4, p2_)
    d3 = orient2d(p1, p2_, p3)
    d4 = orient2d(p1, p2_, p4)

    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        # collinear: overlap interval along the dominant axis
        def key(p):
            return (p.x, p.y)

        a, b = sorted((p1, p2_), key=key)
        c, d = sorted((p3, p4), key=key)
        lo = max(a, c, key=key)
        hi = min(b, d, key=key)
        if key(lo) > key(hi):
            return []
        if key(lo) == key(hi):
            return [lo]
        return [lo, hi]

    if d1 * d2 > 0 or d3 * d4 > 0:
        return []

    # touching at an endpoint?
    for p, s in ((p1, d1), (p2_, d2)):
        if s == 0 and _within_span(p3, p4, p):
            return [p]
    for p, s in ((p3, d3), (p4, d4)):
        if s == 0 and _within_span(p1, p2_, p):
            return [p]
    if d1 * d2 < 0 and d3 * d4 < 0:
        # proper crossing: line intersection
        r_x, r_y = p2_.x - p1.x, p2_.y - p1.y
        s_x, s_y = p4.x - p3.x, p4.y - p3.y
        denom = r_x * s_y - r_y * s_x
        t = ((p3.x - p1.x) * s_y - (p3.y - p1.y) * s_x) / denom
        return [Point2(p1.x + t * r_x, p1.y + t * r_y)]
    return []


def _within_span(a: Point2, b: Point2, q: Point2) -> bool:
    return (min(a.x, b.x) <= q.x <= max(a.x, b.x)
            and min(a.y, b.y) <= q.y <= max(a.y, b.y))
