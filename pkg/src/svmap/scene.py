"""Scene and pixel-set model: parsing, validation, serialization.

Scene text format (line oriented, '#' comments):

    t x1 y1 z1 x2 y2 z2 x3 y3 z3     one triangle, exact coordinates
    viewport xmin ymin xmax ymax     optional explicit viewport
    grid x0 y0 dx dy W H             optional pixel grid
    points                           optional explicit pixel list; every
    x y                              following line is one pixel

Coordinates are integers, fractions 'a/b', or terminating decimals, all
parsed exactly.  The viewport defaults to the pixel bounding box padded
by one grid spacing (or the projected triangle bounding box padded by 1
when there are no pixels).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .errors import (
    PreconditionError,
    SceneFormatError,
    SceneValidationError,
)
from .geometry import Point2, Point3, Triangle, orient2d
from .rational import ONE, ZERO, parse_rational, rat, rat_str

BACKGROUND_ID = -1


@dataclass(frozen=True, slots=True)
class Rect:
    xmin: object
    ymin: object
    xmax: object
    ymax: object

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise SceneValidationError(f"viewport has nonpositive extent: {self}")

    def contains_pixel(self, q: Point2) -> bool:
        """Half-open membership, matching the global perturbation rule."""
        return (self.xmin <= q.x < self.xmax) and (self.ymin <= q.y < self.ymax)

    def __repr__(self):
        return f"[{self.xmin},{self.xmax}]x[{self.ymin},{self.ymax}]"


class LatticeMap:
    """Exact affine bijection between grid indices and plane coordinates."""

    __slots__ = ("origin", "dx", "dy")

    def __init__(self, origin: Point2, dx, dy):
        if not (dx > 0 and dy > 0):
            raise SceneValidationError("grid spacing must be positive")
        self.origin = origin
        self.dx = dx
        self.dy = dy

    def to_plane(self, i: int, j: int) -> Point2:
        return Point2(self.origin.x + i * self.dx, self.origin.y + j * self.dy)

    def to_lattice(self, q: Point2):
        """Exact rational lattice coordinates (not necessarily integral)."""
        return ((q.x - self.origin.x) / self.dx, (q.y - self.origin.y) / self.dy)

    def locate(self, q: Point2) -> Optional[tuple[int, int]]:
        ri, rj = self.to_lattice(q)
        if ri.denominator != 1 or rj.denominator != 1:
            return None
        return (int(ri), int(rj))


class PixelGrid:
    """Regular lattice of W*H pixels, affinely placed."""

    __slots__ = ("origin", "dx", "dy", "width", "height", "lattice")

    def __init__(self, origin: Point2, dx, dy, width: int, height: int):
        if width < 1 or height < 1:
            raise SceneValidationError("grid dims must be positive")
        self.origin = origin
        self.dx = rat(dx)
        self.dy = rat(dy)
        self.width = width
        self.height = height
        self.lattice = LatticeMap(origin, self.dx, self.dy)

    @property
    def count(self) -> int:
        return self.width * self.height

    def pixel_at(self, i: int, j: int) -> Point2:
        if not (0 <= i < self.width and 0 <= j < self.height):
            raise PreconditionError(f"grid index ({i}, {j}) out of range")
        return self.lattice.to_plane(i, j)

    def locate_pixel(self, q: Point2) -> Optional[tuple[int, int]]:
        ij = self.lattice.locate(q)
        if ij is None:
            return None
        i, j = ij
        if not (0 <= i < self.width and 0 <= j < self.height):
            return None
        return ij

    def __iter__(self) -> Iterator[Point2]:
        """Canonical row-major order: j outer, i inner."""
        for j in range(self.height):
            for i in range(self.width):
                yield self.lattice.to_plane(i, j)

    def bbox(self) -> tuple:
        return (
            self.origin.x,
            self.origin.y,
            self.origin.x + (self.width - 1) * self.dx,
            self.origin.y + (self.height - 1) * self.dy,
        )

    def __repr__(self):
        return (f"PixelGrid({self.origin}, d=({self.dx},{self.dy}), "
                f"{self.width}x{self.height})")


class PixelList:
    """Explicit, duplicate-free pixel list; iteration order is list order."""

    __slots__ = ("points",)

    def __init__(self, points: Sequence[Point2]):
        seen = set()
        for q in points:
            key = (q.x, q.y)
            if key in seen:
                raise SceneValidationError(f"duplicate pixel {q}")
            seen.add(key)
        self.points = tuple(points)

    @property
    def count(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point2]:
        return iter(self.points)

    def __repr__(self):
        return f"PixelList({len(self.points)} pixels)"


PixelSet = Union[PixelGrid, PixelList]


class Scene:
    """Immutable scene: triangles, viewport, implicit background plane."""

    __slots__ = ("triangles", "viewport", "background_z")

    def __init__(self, triangles: Sequence[Triangle], viewport: Rect):
        self.triangles = tuple(triangles)
        self.viewport = viewport
        for t in self.triangles:
            for v in t.vertices:
                if not v.z > 0:
                    raise SceneValidationError(
                        f"triangle {t.id} has nonpositive z vertex {v}"
                    )
        zmax = max((t.zmax for t in self.triangles), default=ZERO)
        self.background_z = zmax + ONE

    @property
    def n(self) -> int:
        return len(self.triangles)

    def triangle_by_id(self, tid: int) -> Triangle:
        for t in self.triangles:
            if t.id == tid:
                return t
        raise KeyError(tid)

    def __repr__(self):
        return f"Scene(n={self.n}, viewport={self.viewport})"


# ---------------------------------------------------------------------------
# disjointness
# ---------------------------------------------------------------------------

def _cross3(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _sub3(a: Point3, b: Point3):
    return (a.x - b.x, a.y - b.y, a.z - b.z)


def _tri_normal(t: Triangle):
    v0, v1, v2 = t.vertices
    return _cross3(_sub3(v1, v0), _sub3(v2, v0))


def _coplanar_interiors_intersect(a: Triangle, b: Triangle, normal) -> bool:
    # project onto the dominant-axis plane, then separating-axis over edges
    ax_ = max(range(3), key=lambda i: abs(normal[i]))
    keep = [i for i in range(3) if i != ax_]

    def flat(p: Point3):
        c = (p.x, p.y, p.z)
        return (c[keep[0]], c[keep[1]])

    pa = [flat(v) for v in a.vertices]
    pb = [flat(v) for v in b.vertices]
    for poly in (pa, pb):
        m = len(poly)
        for i in range(m):
            p, q = poly[i], poly[(i + 1) % m]
            nx, ny = q[1] - p[1], p[0] - q[0]
            if nx == 0 and ny == 0:
                continue
            amin = min(nx * v[0] + ny * v[1] for v in pa)
            amax = max(nx * v[0] + ny * v[1] for v in pa)
            bmin = min(nx * v[0] + ny * v[1] for v in pb)
            bmax = max(nx * v[0] + ny * v[1] for v in pb)
            if not (max(amin, bmin) < min(amax, bmax)):
                return False  # separated (touching allowed)
    return True


def _line_interval_in_triangle(p0, direction, t: Triangle, normal):
    """Closed t-parameter interval of {p0 + s*dir} inside triangle t.

    Returns (lo, hi) or None; None also when the line grazes along an edge
    (then the line meets only the boundary).
    """
    lo, hi = None, None  # None = unbounded
    v = t.vertices
    for i in range(3):
        a, b = v[i], v[(i + 1) % 3]
        c = v[(i + 2) % 3]
        edge = _sub3(b, a)
        side_normal = _cross3(edge, normal)  # in-plane normal of the edge line
        inside_sign = _dot3(side_normal, _sub3(c, a))
        f0 = _dot3(side_normal, (p0[0] - a.x, p0[1] - a.y, p0[2] - a.z))
        f1 = _dot3(side_normal, direction)
        # keep {s : (f0 + s*f1) * inside_sign >= 0}
        if inside_sign < 0:
            f0, f1 = -f0, -f1
        if f1 == 0:
            if f0 < 0:
                return None
            if f0 == 0:
                return None  # line runs along this edge: boundary only
            continue
        bound = -f0 / f1
        if f1 > 0:
            lo = bound if lo is None or bound > lo else lo
        else:
            hi = bound if hi is None or bound < hi else hi
        if lo is not None and hi is not None and lo > hi:
            return None
    return (lo, hi)


def triangle_interiors_intersect(a: Triangle, b: Triangle) -> bool:
    """Exact test: do the open triangles share a point in 3-space?"""
    na, nb = _tri_normal(a), _tri_normal(b)
    da = _dot3(na, (a.vertices[0].x, a.vertices[0].y, a.vertices[0].z))
    db = _dot3(nb, (b.vertices[0].x, b.vertices[0].y, b.vertices[0].z))
    direction = _cross3(na, nb)
    if direction == (0, 0, 0):
        # parallel planes: coplanar iff b's vertex satisfies a's equation
        if _dot3(na, (b.vertices[0].x, b.vertices[0].y, b.vertices[0].z)) != da:
            return False
        return _coplanar_interiors_intersect(a, b, na)
    dd = _dot3(direction, direction)
    c1 = _cross3(nb, direction)
    c2 = _cross3(direction, na)
    p0 = tuple((da * c1[i] + db * c2[i]) / dd for i in range(3))
    ia = _line_interval_in_triangle(p0, direction, a, na)
    if ia is None:
        return False
    ib = _line_interval_in_triangle(p0, direction, b, nb)
    if ib is None:
        return False
    lo = max(x for x in (ia[0], ib[0]) if x is not None) \
        if (ia[0] is not None or ib[0] is not None) else None
    hi = min(x for x in (ia[1], ib[1]) if x is not None) \
        if (ia[1] is not None or ib[1] is not None) else None
    if lo is None or hi is None:
        # triangles are bounded, so both intervals are finite; reaching here
        # means a degenerate direction, treat conservatively as no interior
        return False
    return lo < hi


def validate_disjoint(scene: Scene) -> Optional[tuple[int, int]]:
    """Exact pairwise open-intersection test; returns an offending pair."""
    tris = scene.triangles
    for i in range(len(tris)):
        for j in range(i + 1, len(tris)):
            if triangle_interiors_intersect(tris[i], tris[j]):
                return (tris[i].id, tris[j].id)
    return None


# ---------------------------------------------------------------------------
# parsing / serialization
# ---------------------------------------------------------------------------

@dataclass
class LoadedScene:
    scene: Scene
    pixels: Optional[PixelSet]


def _parse_coords(parts, count, lineno):
    if len(parts) != count:
        raise SceneFormatError(
            f"expected {count} coordinates, got {len(parts)}", lineno
        )
    try:
        return [parse_rational(p) for p in parts]
    except ValueError as exc:
        raise SceneFormatError(str(exc), lineno) from None


def parse_scene_text(text: str):
    """Raw parse: triangles, optional viewport, optional pixel spec."""
    triangles_raw = []
    viewport = None
    grid = None
    points: Optional[list[Point2]] = None
    in_points = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        head = parts[0]
        if in_points and head not in ("t", "viewport", "grid", "points"):
            c = _parse_coords(parts, 2, lineno)
            points.append(Point2(c[0], c[1]))
            continue
        if head == "t":
            c = _parse_coords(parts[1:], 9, lineno)
            triangles_raw.append(
                (Point3(c[0], c[1], c[2]), Point3(c[3], c[4], c[5]),
                 Point3(c[6], c[7], c[8]), lineno)
            )
        elif head == "viewport":
            c = _parse_coords(parts[1:], 4, lineno)
            viewport = (c[0], c[1], c[2], c[3])
        elif head == "grid":
            if len(parts) != 7:
                raise SceneFormatError("grid needs x0 y0 dx dy W H", lineno)
            c = _parse_coords(parts[1:5], 4, lineno)
            try:
                w, h = int(parts[5]), int(parts[6])
            except ValueError:
                raise SceneFormatError("grid dims must be integers", lineno) from None
            grid = (c[0], c[1], c[2], c[3], w, h)
        elif head == "points":
            points = []
            in_points = True
        else:
            raise SceneFormatError(f"unknown directive {head!r}", lineno)
    return triangles_raw, viewport, grid, points


def load_scene(text: str, *, validate: bool = True,
               viewport_override: Optional[tuple] = None) -> LoadedScene:
    """Parse + validate a scene file; resolves viewport and pixel set."""
    triangles_raw, viewport_spec, grid_spec, points_spec = parse_scene_text(text)

    triangles = []
    for tid, (v0, v1, v2, lineno) in enumerate(triangles_raw):
        for v in (v0, v1, v2):
            if not v.z > 0:
                raise SceneFormatError(
                    f"nonpositive z coordinate {rat_str(v.z)}", lineno
                )
        if orient2d(v0.project(), v1.project(), v2.project()) == 0:
            raise SceneFormatError(
                f"degenerate triangle (collinear projection)", lineno
            )
        triangles.append(Triangle(tid, v0, v1, v2))

    pixels: Optional[PixelSet] = None
    pad = (ONE, ONE)
    if grid_spec is not None and points_spec is not None:
        raise SceneFormatError("both grid and points given")
    if grid_spec is not None:
        x0, y0, dx, dy, w, h = grid_spec
        pixels = PixelGrid(Point2(x0, y0), dx, dy, w, h)
        pad = (pixels.dx, pixels.dy)
    elif points_spec is not None:
        pixels = PixelList(points_spec)

    if viewport_override is not None:
        viewport_spec = tuple(rat(v) for v in viewport_override)
    if viewport_spec is not None:
        viewport = Rect(*viewport_spec)
    else:
        viewport = derive_viewport(triangles, pixels, pad)

    scene = Scene(triangles, viewport)
    if pixels is not None:
        check_pixels_in_viewport(pixels, viewport)
    if validate:
        pair = validate_disjoint(scene)
        if pair is not None:
            raise SceneValidationError(
                f"triangles {pair[0]} and {pair[1]} intersect"
            )
    return LoadedScene(scene, pixels)


def derive_viewport(triangles, pixels, pad) -> Rect:
    if pixels is not None:
        if isinstance(pixels, PixelGrid):
            bx0, by0, bx1, by1 = pixels.bbox()
        else:
            if not pixels.points:
                raise SceneValidationError(
                    "cannot derive a viewport from an empty pixel list"
                )
            xs = [q.x for q in pixels.points]
            ys = [q.y for q in pixels.points]
            bx0, by0, bx1, by1 = min(xs), min(ys), max(xs), max(ys)
        return Rect(bx0 - pad[0], by0 - pad[1], bx1 + pad[0], by1 + pad[1])
    if triangles:
        xs = [p.x for t in triangles for p in t.proj]
        ys = [p.y for t in triangles for p in t.proj]
        return Rect(min(xs) - ONE, min(ys) - ONE, max(xs) + ONE, max(ys) + ONE)
    raise SceneValidationError("scene has no viewport, no pixels, no triangles")


def check_pixels_in_viewport(pixels: PixelSet, viewport: Rect) -> None:
    if isinstance(pixels, PixelGrid):
        corners = [
            pixels.pixel_at(0, 0),
            pixels.pixel_at(pixels.width - 1, pixels.height - 1),
        ]
        bad = [q for q in corners if not viewport.contains_pixel(q)]
    else:
        bad = [q for q in pixels if not viewport.contains_pixel(q)]
    if bad:
        raise SceneValidationError(
            f"pixel {bad[0]} outside the half-open viewport {viewport}"
        )


def serialize_scene(scene: Scene, pixels: Optional[PixelSet] = None) -> str:
    lines = []
    for t in scene.triangles:
        coords = " ".join(
            f"{rat_str(v.x)} {rat_str(v.y)} {rat_str(v.z)}" for v in t.vertices
        )
        lines.append(f"t {coords}")
    vp = scene.viewport
    lines.append(
        "viewport "
        f"{rat_str(vp.xmin)} {rat_str(vp.ymin)} {rat_str(vp.xmax)} {rat_str(vp.ymax)}"
    )
    if isinstance(pixels, PixelGrid):
        g = pixels
        lines.append(
            f"grid {rat_str(g.origin.x)} {rat_str(g.origin.y)} "
            f"{rat_str(g.dx)} {rat_str(g.dy)} {g.width} {g.height}"
        )
    elif isinstance(pixels, PixelList):
        lines.append("points")
        for q in pixels:
            lines.append(f"{rat_str(q.x)} {rat_str(q.y)}")
    return "\n".join(lines) + "\n"
