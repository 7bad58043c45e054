"""Trapezoids of the decomposed visibility map, and building one per pixel.

A trapezoid is two vertical walls plus non-vertical top and bottom lines,
labeled with the triangle visible inside it.  Membership follows the
global perturbation rule, which collapses to: left wall and bottom line
inclusive, right wall and top line exclusive.  (The jet arithmetic proves
the collapse: comparing (y + eps) against a line evaluated at (x + eps^2)
is decided by the constant terms and then by eps alone, never by the
line's slope.)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .engine import (
    DOWN,
    LEFT,
    RIGHT,
    UP,
    Beam,
    Boundary,
    EdgeStop,
    QueryEngine,
)
from .eps import perturbed
from .errors import InternalError, PreconditionError
from .geometry import Edge3, Line2, Point2
from .scene import BACKGROUND_ID


@dataclass(frozen=True, slots=True)
class Trapezoid:
    triangle_id: int
    x_left: object
    x_right: object
    top: Line2
    bottom: Line2
    top_tag: str = ""
    bottom_tag: str = ""
    left_cause: str = ""
    right_cause: str = ""

    def canonical_key(self):
        """Geometry-only identity: label, walls, supporting lines."""
        return (self.triangle_id, self.x_left, self.x_right,
                self.top.m, self.top.k, self.bottom.m, self.bottom.k)

    def sort_key(self):
        return (self.x_left, self.x_right, self.bottom.m, self.bottom.k,
                self.top.m, self.top.k, self.triangle_id)

    def corners(self):
        """(bottom-left, bottom-right, top-right, top-left), exact."""
        return (
            Point2(self.x_left, self.bottom.y_at(self.x_left)),
            Point2(self.x_right, self.bottom.y_at(self.x_right)),
            Point2(self.x_right, self.top.y_at(self.x_right)),
            Point2(self.x_left, self.top.y_at(self.x_left)),
        )

    def __repr__(self):
        return (f"Trapezoid(id={self.triangle_id}, x=[{self.x_left},"
                f"{self.x_right}), top={self.top}, bottom={self.bottom})")


def contains(trap: Trapezoid, q: Point2) -> bool:
    """Perturbed membership of q in trap."""
    if not (trap.x_left <= q.x < trap.x_right):
        return False
    if not trap.bottom.y_at(q.x) <= q.y:
        return False
    return q.y < trap.top.y_at(q.x)


def _boundary_tag(b: Boundary) -> str:
    if b.kind == "viewport-wall":
        return f"viewport:{b.source}"
    e: Edge3 = b.source
    return f"{b.kind}:t{e.owner}e{e.index}"


def _wall_cause(stop_cause: str, side: str) -> str:
    if stop_cause == "viewport-wall":
        return "viewport"
    return f"edge-stop-{side}"


def build_trapezoid(pi: Point2, engine: QueryEngine) -> Trapezoid:
    """The trapezoid of the decomposed visibility map containing pi.

    Stage 1 shoots the perturbed ray; stage 2 drags it vertically both
    ways to get the top and bottom boundaries; stage 3 drags along each
    boundary to its nearest stops; stage 4 narrows further by the nearest
    blocking vertices inside the beam.
    """
    vp = engine.scene.viewport
    if not vp.contains_pixel(pi):
        raise PreconditionError(f"pixel {pi} outside viewport {vp}")

    hit = engine.ray_shoot(perturbed(pi))
    top_b = engine.drag_vertical(pi, hit, UP)
    bottom_b = engine.drag_vertical(pi, hit, DOWN)

    tl = engine.drag_oblique(top_b, pi.x, LEFT)
    tr = engine.drag_oblique(top_b, pi.x, RIGHT)
    bl = engine.drag_oblique(bottom_b, pi.x, LEFT)
    br = engine.drag_oblique(bottom_b, pi.x, RIGHT)

    plane = engine.plane_for(hit.triangle_id)
    left_candidates = [
        (tl.x, 0, _wall_cause(tl.cause, "top")),
        (bl.x, 1, _wall_cause(bl.cause, "bottom")),
    ]
    right_candidates = [
        (tr.x, 0, _wall_cause(tr.cause, "top")),
        (br.x, 1, _wall_cause(br.cause, "bottom")),
    ]
    beam_lo = max(tl.x, bl.x)
    beam_hi = min(tr.x, br.x)

    left_beam = Beam(beam_lo, pi.x, top_b.line, bottom_b.line, plane,
                     lo_inclusive=False, hi_inclusive=True)
    lb = engine.max_blocking_vertex(left_beam, LEFT)
    if lb is not None:
        left_candidates.append((lb.x, 2, "blocking-vertex"))
    right_beam = Beam(pi.x, beam_hi, top_b.line, bottom_b.line, plane,
                      lo_inclusive=False, hi_inclusive=False)
    rb = engine.max_blocking_vertex(right_beam, RIGHT)
    if rb is not None:
        right_candidates.append((rb.x, 2, "blocking-vertex"))

    x_left, _, left_cause = max(left_candidates, key=lambda c: (c[0], -c[1]))
    x_right, _, right_cause = min(right_candidates, key=lambda c: (c[0], c[1]))

    trap = Trapezoid(
        triangle_id=hit.triangle_id,
        x_left=x_left,
        x_right=x_right,
        top=top_b.line,
        bottom=bottom_b.line,
        top_tag=_boundary_tag(top_b),
        bottom_tag=_boundary_tag(bottom_b),
        left_cause=left_cause,
        right_cause=right_cause,
    )
    if not x_left < x_right:
        raise InternalError(f"zero-width cell built at {pi}: {trap}")
    if not contains(trap, pi):
        raise InternalError(f"built cell does not contain its pixel {pi}: {trap}")
    return trap
