"""The query primitives: ray shooting, ray dragging, beam queries.

One interface, two implementations.  BaselineEngine scans everything;
AcceleratedEngine narrows candidates with simple exact indexes (bin
grids over projected bounding boxes, an x-sorted vertex array).  Both
feed identical exact predicates, so results are identical by
construction of the candidate supersets.

All operations resolve boundary cases through the global perturbation:
the query pixel is treated as (x + eps^2, y + eps), eps -> 0+.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .eps import Eps, EpsPoint2, perturbed
from .errors import InternalError, PreconditionError
from .geometry import (
    Edge3,
    Line2,
    Point2,
    Point3,
    Triangle,
    edge_crossing_at_eps,
    point_in_projected_triangle,
    point_in_projected_triangle_eps,
    segment_intersections,
)
from .rational import ZERO, rat, rat_floor
from .scene import BACKGROUND_ID, PixelGrid, PixelList, PixelSet, Scene

UP = 1
DOWN = -1
RIGHT = 1
LEFT = -1


@dataclass(frozen=True, slots=True)
class PlaneRef:
    """Supporting plane z = pc + px*x + py*y of a face (or the background)."""

    triangle_id: int
    px: object
    py: object
    pc: object

    @property
    def is_background(self) -> bool:
        return self.triangle_id == BACKGROUND_ID

    def z_at(self, x, y):
        return self.pc + self.px * x + self.py * y


@dataclass(frozen=True, slots=True)
class HitRecord:
    triangle_id: int
    z: object


@dataclass(frozen=True, slots=True)
class Boundary:
    """A top or bottom boundary found by vertical dragging."""

    kind: str                   # own-edge | curtain | viewport-wall
    source: object              # Edge3, or viewport side name
    line: Line2
    crossing_y: object          # exact y of the boundary at the query abscissa
    side: str                   # top | bottom (which way it was found)
    plane: PlaneRef             # supporting plane of the dragged face


@dataclass(frozen=True, slots=True)
class EdgeStop:
    x: object
    cause: str                  # endpoint | curtain-crossing | viewport-wall
    witness: object             # Point3 vertex, Edge3, or viewport side name


@dataclass(frozen=True, slots=True)
class Beam:
    """Swath between two lines over an x-interval, in front of a plane."""

    x_lo: object
    x_hi: object
    top: Line2
    bottom: Line2
    plane: PlaneRef
    lo_inclusive: bool = False
    hi_inclusive: bool = False


@dataclass(frozen=True, slots=True)
class BlockingVertex:
    x: object
    vertex: Point3
    triangle_id: int


_CAUSE_RANK = {"endpoint": 0, "curtain-crossing": 1, "viewport-wall": 2}
_KIND_RANK = {"own-edge": 0, "curtain": 1, "viewport-wall": 2}

OPS = ("ray_shoot", "drag_vertical", "drag_oblique",
       "max_blocking_vertex", "pixels_in_trapezoid")


class QueryEngine:
    """Shared machinery; subclasses supply candidate enumeration."""

    name = "abstract"

    def __init__(self, scene: Scene):
        self.scene = scene
        self.counters = {op: 0 for op in OPS}
        self._background = PlaneRef(BACKGROUND_ID, ZERO, ZERO, scene.background_z)
        self._planes = {
            t.id: PlaneRef(t.id, t.px, t.py, t.pc) for t in scene.triangles
        }
        self._all_edges = [e for t in scene.triangles for e in t.edges]
        self._all_vertices = [
            (v, t.id, i)
            for t in scene.triangles
            for i, v in enumerate(t.vertices)
        ]

    # -- candidate hooks ---------------------------------------------------

    def _tri_candidates(self, x, y):
        raise NotImplementedError

    def _edge_candidates_column(self, x):
        raise NotImplementedError

    def _edge_candidates_span(self, xmin, xmax):
        raise NotImplementedError

    def _vertex_candidates(self, xmin, xmax):
        raise NotImplementedError

    # -- operations ----------------------------------------------------------

    def plane_for(self, triangle_id: int) -> PlaneRef:
        if triangle_id == BACKGROUND_ID:
            return self._background
        return self._planes[triangle_id]

    def ray_shoot(self, q: Union[Point2, EpsPoint2]) -> HitRecord:
        """First triangle hit by the +z ray through q.

        A plain Point2 is tested against closed projections with depth
        ties broken by smallest id; an EpsPoint2 applies the perturbation
        convention (containment is then always strict).
        """
        self.counters["ray_shoot"] += 1
        if isinstance(q, EpsPoint2):
            return self._ray_shoot_eps(q)
        best = None
        for t in self._tri_candidates(q.x, q.y):
            if point_in_projected_triangle(q, t) == "outside":
                continue
            z = t.plane_z(q.x, q.y)
            key = (z, t.id)
            if best is None or key < best:
                best = key
        if best is None:
            return HitRecord(BACKGROUND_ID, self.scene.background_z)
        return HitRecord(best[1], best[0])

    def _ray_shoot_eps(self, q: EpsPoint2) -> HitRecord:
        best_key = None
        best_tri = None
        for t in self._tri_candidates(q.x.a0, q.y.a0):
            if not point_in_projected_triangle_eps(q, t):
                continue
            z = t.plane_z(q.x, q.y)  # jet
            if best_key is None or (z, t.id) < best_key:
                best_key = (z, t.id)
                best_tri = t
        if best_tri is None:
            return HitRecord(BACKGROUND_ID, self.scene.background_z)
        return HitRecord(best_tri.id, best_tri.plane_z(q.x.a0, q.y.a0))

    def drag_vertical(self, pi: Point2, hit: HitRecord, direction: int) -> Boundary:
        """First boundary above (+1) or below (-1) the perturbed pixel."""
        self.counters["drag_vertical"] += 1
        q = perturbed(pi)
        plane = self.plane_for(hit.triangle_id)
        face_id = hit.triangle_id
        up = direction > 0

        best = None  # (y, z, owner, index, edge)
        for e in self._edge_candidates_column(pi.x):
            cross = edge_crossing_at_eps(e, q.x)
            if cross is None:
                continue
            y, z = cross
            if up:
                if not y > q.y:
                    continue
            else:
                if not y < q.y:
                    continue
            if e.owner != face_id:
                if not z < plane.z_at(q.x, y):
                    continue
            cand = (y, z, e.owner, e.index, e)
            if best is None:
                best = cand
            else:
                if up:
                    better = cand[:4] < best[:4]
                else:
                    # farthest down = max y; ties by front-most then id
                    better = (
                        cand[0] > best[0]
                        or (cand[0] == best[0] and cand[1:4] < best[1:4])
                    )
                if better:
                    best = cand
        vp = self.scene.viewport
        wall_y = vp.ymax if up else vp.ymin
        use_wall = False
        if best is None:
            use_wall = True
        else:
            wall_jet = Eps(wall_y)
            # the wall wins only when strictly nearer than the best edge
            use_wall = wall_jet < best[0] if up else wall_jet > best[0]
        if use_wall:
            side_name = "top" if up else "bottom"
            line = Line2.horizontal(wall_y)
            return Boundary("viewport-wall", side_name, line, wall_y,
                            "top" if up else "bottom", plane)
        e = best[4]
        kind = "own-edge" if e.owner == face_id else "curtain"
        return Boundary(kind, e, e.line, e.y_at(pi.x),
                        "top" if up else "bottom", plane)

    def _wall_segment(self, side: str):
        vp = self.scene.viewport
        if side == "top":
            return (Point2(vp.xmin, vp.ymax), Point2(vp.xmax, vp.ymax))
        if side == "bottom":
            return (Point2(vp.xmin, vp.ymin), Point2(vp.xmax, vp.ymin))
        raise InternalError(f"not a draggable wall: {side}")

    def drag_oblique(self, b: Boundary, start_x, direction: int) -> EdgeStop:
        """Nearest stop along a boundary, beyond the perturbed abscissa.

        Stops are: the dragged segment's endpoints, its viewport-boundary
        crossings, and crossings with edges that reach strictly into the
        dragged face's side and either belong to the face's triangle or lie
        strictly in front of the face's plane.
        """
        self.counters["drag_oblique"] += 1
        start_x = rat(start_x)
        plane = b.plane
        face_id = plane.triangle_id
        vp = self.scene.viewport

        if b.kind == "viewport-wall":
            sa, sb_ = self._wall_segment(b.source)
            source_edge = None
            if not (sa.x <= start_x < sb_.x):
                raise PreconditionError(
                    f"start_x {start_x} outside wall span [{sa.x}, {sb_.x})"
                )
        else:
            source_edge = b.source
            sa, sb_ = source_edge.pa, source_edge.pb
            if not (source_edge.xmin <= start_x < source_edge.xmax):
                raise PreconditionError(
                    f"start_x {start_x} outside edge span "
                    f"[{source_edge.xmin}, {source_edge.xmax})"
                )

        line = b.line
        face_below = b.side == "top"  # the dragged face lies below a top boundary

        events = []  # (x, cause_rank, owner, index, cause, witness)
        # endpoints
        if b.kind == "viewport-wall":
            events.append((sa.x, _CAUSE_RANK["viewport-wall"], 0, 0,
                           "viewport-wall", b.source))
            events.append((sb_.x, _CAUSE_RANK["viewport-wall"], 0, 0,
                           "viewport-wall", b.source))
        else:
            events.append((sa.x, _CAUSE_RANK["endpoint"], source_edge.owner,
                           source_edge.index, "endpoint", source_edge.a))
            events.append((sb_.x, _CAUSE_RANK["endpoint"], source_edge.owner,
                           source_edge.index, "endpoint", source_edge.b))
            # viewport-boundary crossings of the dragged segment
            for side, (wa, wb) in (
                ("left", (Point2(vp.xmin, vp.ymin), Point2(vp.xmin, vp.ymax))),
                ("right", (Point2(vp.xmax, vp.ymin), Point2(vp.xmax, vp.ymax))),
                ("bottom", (Point2(vp.xmin, vp.ymin), Point2(vp.xmax, vp.ymin))),
                ("top", (Point2(vp.xmin, vp.ymax), Point2(vp.xmax, vp.ymax))),
            ):
                for q in segment_intersections(sa, sb_, wa, wb):
                    events.append((q.x, _CAUSE_RANK["viewport-wall"], 0, 0,
                                   "viewport-wall", side))

        for e in self._edge_candidates_span(sa.x, sb_.x):
            if e is source_edge:
                continue
            if e.pa.x == e.pb.x and e.pa.y == e.pb.y:
                continue  # point projection (degenerate scenes only)
            pts = segment_intersections(sa, sb_, e.pa, e.pb)
            if not pts:
                continue
            if len(pts) == 2:
                continue  # collinear overlap carries no side information
            q = pts[0]
            if e.owner == face_id:
                qualified = True
            else:
                if e.vertical:
                    ez = min(e.a.z, e.b.z) if e.pa.y == e.pb.y else e.z_at_y(q.y)
                else:
                    ez = e.z_at_x(q.x)
                qualified = ez < plane.z_at(q.x, q.y)
            if not qualified:
                continue
            # the crossing edge must reach strictly into the face's side
            ya = line.y_at(e.pa.x)
            yb = line.y_at(e.pb.x)
            if face_below:
                reaches = e.pa.y < ya or e.pb.y < yb
            else:
                reaches = e.pa.y > ya or e.pb.y > yb
            if not reaches:
                continue
            events.append((q.x, _CAUSE_RANK["curtain-crossing"], e.owner,
                           e.index, "curtain-crossing", e))

        # nearest event strictly beyond the perturbed start (x + eps^2):
        # rightward means x > start_x; leftward means x <= start_x.
        best = None
        for ev in events:
            x = ev[0]
            if direction > 0:
                if not x > start_x:
                    continue
                if best is None or (x, ev[1], ev[2], ev[3]) < \
                        (best[0], best[1], best[2], best[3]):
                    best = ev
            else:
                if not x <= start_x:
                    continue
                if best is None or (-x, ev[1], ev[2], ev[3]) < \
                        (-best[0], best[1], best[2], best[3]):
                    best = ev
        if best is None:
            raise InternalError(
                f"drag along {b} from {start_x} found no stop (dir {direction})"
            )
        return EdgeStop(best[0], best[4], best[5])

    def max_blocking_vertex(self, beam: Beam, direction: int
                            ) -> Optional[BlockingVertex]:
        """Extremal triangle vertex inside the open beam, before the plane.

        direction -1 returns the max-x such vertex, +1 the min-x one; ties
        by max y then smallest triangle id.
        """
        self.counters["max_blocking_vertex"] += 1
        best = None  # (x, y, owner, index, vertex)
        for (v, owner, idx) in self._vertex_candidates(beam.x_lo, beam.x_hi):
            if beam.lo_inclusive:
                if not beam.x_lo <= v.x:
                    continue
            else:
                if not beam.x_lo < v.x:
                    continue
            if beam.hi_inclusive:
                if not v.x <= beam.x_hi:
                    continue
            else:
                if not v.x < beam.x_hi:
                    continue
            if not v.y < beam.top.y_at(v.x):
                continue
            if not v.y > beam.bottom.y_at(v.x):
                continue
            if not v.z < beam.plane.z_at(v.x, v.y):
                continue
            cand = (v.x, v.y, owner, idx, v)
            if best is None:
                best = cand
            else:
                if direction < 0:
                    better = (cand[0] > best[0]
                              or (cand[0] == best[0]
                                  and (-cand[1], cand[2], cand[3])
                                  < (-best[1], best[2], best[3])))
                else:
                    better = (cand[0] < best[0]
                              or (cand[0] == best[0]
                                  and (-cand[1], cand[2], cand[3])
                                  < (-best[1], best[2], best[3])))
                if better:
                    best = cand
        if best is None:
            return None
        return BlockingVertex(best[0], best[4], best[2])

    def pixels_in_trapezoid(self, trap, pixels: PixelSet) -> list[Point2]:
        """All pixels the perturbed-membership rule places in trap."""
        self.counters["pixels_in_trapezoid"] += 1
        return self._pixels_in_trapezoid_impl(trap, pixels)

    def _pixels_in_trapezoid_impl(self, trap, pixels):
        raise NotImplementedError


class BaselineEngine(QueryEngine):
    """Exhaustive O(n)-per-query scans; the semantics reference."""

    name = "baseline"

    def _tri_candidates(self, x, y):
        return self.scene.triangles

    def _edge_candidates_column(self, x):
        return self._all_edges

    def _edge_candidates_span(self, xmin, xmax):
        return self._all_edges

    def _vertex_candidates(self, xmin, xmax):
        return self._all_vertices

    def _pixels_in_trapezoid_impl(self, trap, pixels):
        from .trapezoid import contains

        return [q for q in pixels if contains(trap, q)]


class AcceleratedEngine(QueryEngine):
    """Bin-grid / sorted-array candidate narrowing, same exact predicates."""

    name = "accel"

    def __init__(self, scene: Scene):
        super().__init__(scene)
        vp = scene.viewport
        n = max(1, scene.n)
        self._nbins = max(1, math.isqrt(n) * 2)
        self._x0, self._x1 = vp.xmin, vp.xmax
        self._y0, self._y1 = vp.ymin, vp.ymax
        self._xw = (self._x1 - self._x0) / self._nbins
        self._yw = (self._y1 - self._y0) / self._nbins

        self._tri_bins = [[] for _ in range(self._nbins * self._nbins)]
        for t in scene.triangles:
            xs = [p.x for p in t.proj]
            ys = [p.y for p in t.proj]
            for bi in self._xbin_range(min(xs), max(xs)):
                for bj in self._ybin_range(min(ys), max(ys)):
                    self._tri_bins[bj * self._nbins + bi].append(t)

        self._edge_bins = [[] for _ in range(self._nbins)]
        for e in self._all_edges:
            for bi in self._xbin_range(e.xmin, e.xmax):
                self._edge_bins[bi].append(e)

        self._vertices_sorted = sorted(
            self._all_vertices, key=lambda rec: (rec[0].x, rec[0].y, rec[1], rec[2])
        )
        self._vx = [rec[0].x for rec in self._vertices_sorted]

    def _xbin(self, x) -> int:
        if self._xw == 0:
            return 0
        i = rat_floor((x - self._x0) / self._xw)
        return min(max(i, 0), self._nbins - 1)

    def _ybin(self, y) -> int:
        if self._yw == 0:
            return 0
        j = rat_floor((y - self._y0) / self._yw)
        return min(max(j, 0), self._nbins - 1)

    def _xbin_range(self, lo, hi):
        return range(self._xbin(lo), self._xbin(hi) + 1)

    def _ybin_range(self, lo, hi):
        return range(self._ybin(lo), self._ybin(hi) + 1)

    def _tri_candidates(self, x, y):
        return self._tri_bins[self._ybin(y) * self._nbins + self._xbin(x)]

    def _edge_candidates_column(self, x):
        return self._edge_bins[self._xbin(x)]

    def _edge_candidates_span(self, xmin, xmax):
        lo, hi = self._xbin(xmin), self._xbin(xmax)
        if lo == hi:
            return self._edge_bins[lo]
        seen = set()
        out = []
        for bi in range(lo, hi + 1):
            for e in self._edge_bins[bi]:
                if id(e) not in seen:
                    seen.add(id(e))
                    out.append(e)
        return out

    def _vertex_candidates(self, xmin, xmax):
        import bisect

        lo = bisect.bisect_left(self._vx, xmin)
        hi = bisect.bisect_right(self._vx, xmax)
        return self._vertices_sorted[lo:hi]

    def _pixels_in_trapezoid_impl(self, trap, pixels):
        from .rational import rat_ceil
        from .trapezoid import contains

        if isinstance(pixels, PixelList):
            out = [q for q in pixels if trap.x_left <= q.x < trap.x_right
                   and contains(trap, q)]
            return out
        g: PixelGrid = pixels
        # column range: x_left <= x0 + i*dx < x_right (left closed, right open)
        i_lo = max(0, rat_ceil((trap.x_left - g.origin.x) / g.dx))
        i_hi = min(g.width - 1, rat_ceil((trap.x_right - g.origin.x) / g.dx) - 1)
        found = []
        for i in range(i_lo, i_hi + 1):
            x = g.origin.x + i * g.dx
            b = trap.bottom.y_at(x)
            t = trap.top.y_at(x)
            j_lo = max(0, rat_ceil((b - g.origin.y) / g.dy))
            j_hi = min(g.height - 1, rat_ceil((t - g.origin.y) / g.dy) - 1)
            for j in range(j_lo, j_hi + 1):
                found.append((j, i))
        found.sort()
        return [g.pixel_at(i, j) for (j, i) in found]


def make_engine(scene: Scene, name: str) -> QueryEngine:
    if name == "baseline":
        return BaselineEngine(scene)
    if name in ("accel", "accelerated"):
        return AcceleratedEngine(scene)
    raise PreconditionError(f"unknown engine {name!r}")
