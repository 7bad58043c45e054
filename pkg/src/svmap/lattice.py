"""Lowest leftmost lattice point in a convex polygon.

The fast routine solves min (x, then y) over integer points satisfying a
small set of halfplane constraints with per-constraint open/closed flags.
Searching the minimum column uses emptiness tests; emptiness of a thin
sliver is decided by a Euclidean/continued-fraction descent (shear by the
integer part of the slope, transpose when both binding slopes fall in the
same unit interval), so long empty slivers cost logarithmically many
steps instead of one scan per column.  A bounded brute-force scan with
identical inclusion semantics serves as the test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BudgetExceededError, InternalError, PreconditionError
from .geometry import Point2, orient2d
from .rational import rat, rat_ceil, rat_floor

DEFAULT_BRUTE_BUDGET = 4_000_000

# a halfplane is (a, b, c, strict) meaning a*x + b*y <= c (< when strict)
HalfPlane = tuple


@dataclass(frozen=True)
class ConvexPolygon:
    """CCW vertex list with per-edge open flags; 1 or 2 vertices = degenerate.

    edge_open[i] applies to the edge from vertices[i] to vertices[i+1];
    an open edge excludes its boundary line from the region.
    """

    vertices: tuple
    edge_open: tuple

    @staticmethod
    def make(vertices: Sequence[Point2],
             edge_open: Optional[Sequence[bool]] = None) -> "ConvexPolygon":
        verts = tuple(vertices)
        if not verts:
            raise PreconditionError("polygon needs at least one vertex")
        if edge_open is None:
            edge_open = (False,) * len(verts)
        flags = tuple(bool(f) for f in edge_open)
        if len(flags) != len(verts):
            raise PreconditionError("one flag per edge required")
        if len(verts) >= 3:
            m = len(verts)
            for i in range(m):
                if orient2d(verts[i - 1], verts[i], verts[(i + 1) % m]) <= 0:
                    raise PreconditionError(
                        "vertices must be strictly convex counterclockwise"
                    )
        return ConvexPolygon(verts, flags)

    def halfplanes(self) -> list[HalfPlane]:
        verts = self.vertices
        if len(verts) >= 3:
            out = []
            m = len(verts)
            for i in range(m):
                v1, v2 = verts[i], verts[(i + 1) % m]
                dx, dy = v2.x - v1.x, v2.y - v1.y
                out.append((dy, -dx, dy * v1.x - dx * v1.y, self.edge_open[i]))
            return out
        xs = [v.x for v in verts]
        ys = [v.y for v in verts]
        box = [
            (rat(1), rat(0), max(xs), False),
            (rat(-1), rat(0), -min(xs), False),
            (rat(0), rat(1), max(ys), False),
            (rat(0), rat(-1), -min(ys), False),
        ]
        if len(verts) == 2 and verts[0] != verts[1]:
            v1, v2 = verts
            dx, dy = v2.x - v1.x, v2.y - v1.y
            c = dy * v1.x - dx * v1.y
            box.append((dy, -dx, c, False))
            box.append((-dy, dx, -c, False))
        return box


def lowest_leftmost_lattice_point(poly: ConvexPolygon) -> Optional[tuple[int, int]]:
    """Integer point in poly minimizing x then y, or None."""
    return lexmin_halfplanes(poly.halfplanes())


def lattice_point_brute(poly: ConvexPolygon,
                        budget: int = DEFAULT_BRUTE_BUDGET
                        ) -> Optional[tuple[int, int]]:
    """Exhaustive (x, y)-lexicographic scan of the bounding box."""
    hps = poly.halfplanes()
    xs = [v.x for v in poly.vertices]
    ys = [v.y for v in poly.vertices]
    x_lo, x_hi = rat_ceil(min(xs)), rat_floor(max(xs))
    y_lo, y_hi = rat_ceil(min(ys)), rat_floor(max(ys))
    checked = 0
    for x in range(x_lo, x_hi + 1):
        for y in range(y_lo, y_hi + 1):
            checked += 1
            if checked > budget:
                raise BudgetExceededError(
                    f"brute lattice scan exceeded budget {budget}"
                )
            if _point_satisfies(hps, x, y):
                return (x, y)
    return None


def _point_satisfies(hps, x, y) -> bool:
    for (a, b, c, strict) in hps:
        v = a * x + b * y
        if strict:
            if not v < c:
                return False
        elif not v <= c:
            return False
    return True


# ---------------------------------------------------------------------------
# the solver: lexicographic minimum over integer points of halfplanes
# ---------------------------------------------------------------------------

# lower/upper line constraints are (slope, intercept, strict):
#   lower: y >= slope*x + intercept   upper: y <= slope*x + intercept


def _ceil_f(value, strict: bool) -> int:
    return rat_floor(value) + 1 if strict else rat_ceil(value)


def _floor_f(value, strict: bool) -> int:
    return rat_ceil(value) - 1 if strict else rat_floor(value)


def _col_feasible(c: int, lowers, uppers) -> Optional[tuple[int, int]]:
    y_lo = None
    for (m, k, strict) in lowers:
        b = _ceil_f(m * c + k, strict)
        if y_lo is None or b > y_lo:
            y_lo = b
    y_hi = None
    for (m, k, strict) in uppers:
        b = _floor_f(m * c + k, strict)
        if y_hi is None or b < y_hi:
            y_hi = b
    if y_lo is None or y_hi is None:
        raise InternalError("column test needs both lower and upper bounds")
    if y_lo > y_hi:
        return None
    return (c, y_lo)


def _binding(lines, mid, want_max: bool):
    """The line dominating at mid; ties merge strictness (same line)."""
    best = None
    best_val = None
    strict = False
    for (m, k, s) in lines:
        v = m * mid + k
        if best is None or (v > best_val if want_max else v < best_val):
            best, best_val, strict = (m, k, s), v, s
        elif v == best_val:
            strict = strict or s
    return (best[0], best[1], strict)


def _any_multi(clo: int, chi: int, lowers, uppers, depth: int):
    """A witness integer point with clo <= x <= chi, or None."""
    if clo > chi:
        return None
    if depth > 200:
        raise InternalError("lattice descent failed to terminate")
    if chi - clo <= 16:
        for c in range(clo, chi + 1):
            w = _col_feasible(c, lowers, uppers)
            if w:
                return w
        return None
    if len(lowers) == 1 and len(uppers) == 1:
        return _any_two(clo, chi, lowers[0], uppers[0], depth)

    # split where the binding lower/upper switches
    events = set()
    for group in (lowers, uppers):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                m1, k1, _ = group[i]
                m2, k2, _ = group[j]
                if m1 != m2:
                    x = (k2 - k1) / (m1 - m2)
                    if clo < x < chi:
                        events.add(x)
    if not events:
        mid = (rat(clo) + rat(chi)) / 2
        a = _binding(lowers, mid, want_max=True)
        b = _binding(uppers, mid, want_max=False)
        return _any_two(clo, chi, a, b, depth)

    cursor = clo
    for ev in sorted(events):
        top = _floor_f(ev, False)
        if ev == top:  # integral event: full check at the boundary column
            seg_hi = top - 1
        else:
            seg_hi = top
        if cursor <= min(seg_hi, chi):
            mid = (rat(cursor) + rat(min(seg_hi, chi))) / 2
            a = _binding(lowers, mid, want_max=True)
            b = _binding(uppers, mid, want_max=False)
            w = _any_two(cursor, min(seg_hi, chi), a, b, depth + 1)
            if w:
                return w
        if ev == top and clo <= top <= chi and top >= cursor:
            w = _col_feasible(top, lowers, uppers)
            if w:
                return w
            cursor = top + 1
        else:
            cursor = max(cursor, top + 1)
        if cursor > chi:
            return None
    if cursor <= chi:
        mid = (rat(cursor) + rat(chi)) / 2
        a = _binding(lowers, mid, want_max=True)
        b = _binding(uppers, mid, want_max=False)
        return _any_two(cursor, chi, a, b, depth + 1)
    return None


def _any_two(clo: int, chi: int, lower, upper, depth: int):
    """Witness for a pure two-line system over integer columns [clo, chi]."""
    if clo > chi:
        return None
    if depth > 200:
        raise InternalError("lattice descent failed to terminate")
    if chi - clo <= 16:
        for c in range(clo, chi + 1):
            w = _col_feasible(c, [lower], [upper])
            if w:
                return w
        return None
    c = (clo + chi) // 2
    w = _col_feasible(c, [lower], [upper])
    if w:
        return w

    alpha, beta, s_a = lower
    gamma, delta, s_b = upper
    k = rat_floor(alpha)
    a2 = (alpha - k, beta, s_a)   # after y' = y - k*x
    b2 = (gamma - k, delta, s_b)
    slo, shi = (a2[0], b2[0]) if a2[0] <= b2[0] else (b2[0], a2[0])
    s = rat_ceil(slo)
    if s <= shi:
        # an integer direction lies between the slopes: the per-column
        # intervals are nested, so one end column decides feasibility
        probe = chi if a2[0] <= b2[0] else clo
        w = _col_feasible(probe, [a2], [b2])
        if w:
            return (w[0], w[1] + k * w[0])
        return None

    # both slopes strictly inside one unit interval: transpose (x <-> y')
    al, be = a2[0], a2[1]
    ga, de = b2[0], b2[1]
    if not (al > 0 and ga > 0):
        raise InternalError("invert step expects slopes in (0,1)")
    new_upper = (1 / al, -be / al, s_a)   # x <= (y' - beta)/alpha
    new_lower = (1 / ga, -de / ga, s_b)   # x >= (y' - delta)/gamma
    lo_const = (rat(0), rat(clo), False)  # x >= clo
    hi_const = (rat(0), rat(chi), False)  # x <= chi
    v_lo = rat_floor(min(a2[0] * clo + be, a2[0] * chi + be))
    v_hi = rat_ceil(max(b2[0] * clo + de, b2[0] * chi + de))
    w = _any_multi(v_lo, v_hi, [new_lower, lo_const], [new_upper, hi_const],
                   depth + 1)
    if w:
        u2, v2 = w   # u2 = y', v2 = x
        return (v2, u2 + k * v2)
    return None


def _enumerate_vertices(hps):
    """Closed-feasible pairwise intersection points of the boundary lines."""
    pts = []
    m = len(hps)
    for i in range(m):
        a1, b1, c1, _ = hps[i]
        for j in range(i + 1, m):
            a2, b2, c2, _ = hps[j]
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            x = (c1 * b2 - c2 * b1) / det
            y = (a1 * c2 - a2 * c1) / det
            if all(a * x + b * y <= c for (a, b, c, _s) in hps):
                pts.append((x, y))
    return pts


def lexmin_halfplanes(hps: Sequence[HalfPlane]) -> Optional[tuple[int, int]]:
    """Integer point satisfying every halfplane, minimizing x then y."""
    lowers, uppers = [], []
    c_lo, c_hi = None, None
    for (a, b, c, strict) in hps:
        if b == 0:
            if a == 0:
                if c < 0 or (c == 0 and strict):
                    return None
                continue
            v = c / a
            if a > 0:  # x <= v
                bound = _floor_f(v, strict)
                c_hi = bound if c_hi is None else min(c_hi, bound)
            else:      # x >= v  (v = c/a with a < 0)
                bound = _ceil_f(v, strict)
                c_lo = bound if c_lo is None else max(c_lo, bound)
        elif b > 0:    # y <= (c - a*x)/b
            uppers.append((-a / b, c / b, strict))
        else:          # y >= (c - a*x)/b
            lowers.append((-a / b, c / b, strict))

    if not lowers or not uppers:
        raise InternalError("lexmin needs a bounded system")
    verts = _enumerate_vertices(hps)
    if not verts:
        return None
    x_min = min(v[0] for v in verts)
    x_max = max(v[0] for v in verts)
    start = rat_ceil(x_min) if c_lo is None else max(c_lo, rat_ceil(x_min))
    end = rat_floor(x_max) if c_hi is None else min(c_hi, rat_floor(x_max))
    if start > end:
        return None

    if _any_multi(start, end, lowers, uppers, 0) is None:
        return None
    lo, hi = start, end
    while lo < hi:
        mid = (lo + hi) // 2
        if _any_multi(lo, mid, lowers, uppers, 0) is not None:
            hi = mid
        else:
            lo = mid + 1
    w = _col_feasible(lo, lowers, uppers)
    if w is None:
        raise InternalError("binary search landed on an infeasible column")
    return w


def polygon_from_halfplanes(hps: Sequence[HalfPlane]) -> Optional[ConvexPolygon]:
    """Vertex form of a bounded halfplane intersection, flags preserved.

    Returns None when the closed region is empty.  Collapses to the
    degenerate 1- or 2-vertex forms when the region has no interior.
    """
    pts = _enumerate_vertices(hps)
    if not pts:
        return None
    uniq = sorted(set(pts))
    hull = _convex_hull([Point2(x, y) for (x, y) in uniq])
    if len(hull) <= 2:
        return ConvexPolygon.make(hull)
    flags = []
    m = len(hull)
    for i in range(m):
        v1, v2 = hull[i], hull[(i + 1) % m]
        strict = False
        matched = False
        for (a, b, c, s) in hps:
            if a * v1.x + b * v1.y == c and a * v2.x + b * v2.y == c:
                matched = True
                strict = strict or s
        if not matched:
            raise InternalError("hull edge not on any constraint line")
        flags.append(strict)
    return ConvexPolygon.make(hull, flags)


def _convex_hull(points: list[Point2]) -> list[Point2]:
    """Monotone chain, ccw, collinear points dropped."""
    pts = sorted(set((p.x, p.y) for p in points))
    pts = [Point2(x, y) for (x, y) in pts]
    if len(pts) <= 2:
        return pts
    lower: list[Point2] = []
    for p in pts:
        while len(lower) >= 2 and orient2d(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and orient2d(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return [pts[0], pts[-1]]  # collinear: keep the extreme pair
    return hull
