"""Sampled visibility map construction: offline marking and online location.

Offline walks the pixels in canonical order, builds the cell of each
unmarked pixel and marks everything that cell contains.  Online answers
each arriving pixel from a semi-dynamic locator and builds only on a
miss.  Both produce the identical trapezoid set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .engine import QueryEngine
from .errors import InternalError, PreconditionError
from .geometry import Point2
from .locator import TrapezoidLocator
from .scene import PixelGrid, PixelList, PixelSet, Scene
from .trapezoid import Trapezoid, build_trapezoid, contains


@dataclass
class SampledVisibilityMap:
    """The discovered trapezoids plus run statistics."""

    trapezoids: tuple[Trapezoid, ...]
    stats: dict
    assignments: Optional[dict] = None  # (x, y) -> triangle_id

    @property
    def t(self) -> int:
        return len(self.trapezoids)

    def key_set(self):
        return {t.canonical_key() for t in self.trapezoids}

    def assignment_of(self, q: Point2) -> int:
        if self.assignments is not None:
            key = (q.x, q.y)
            if key in self.assignments:
                return self.assignments[key]
        for t in self.trapezoids:
            if contains(t, q):
                return t.triangle_id
        raise InternalError(f"pixel {q} not covered by the sampled map")


def _finalize(traps: list[Trapezoid], stats: dict,
              assignments: Optional[dict]) -> SampledVisibilityMap:
    ordered = tuple(sorted(traps, key=lambda t: t.sort_key()))
    stats["t"] = len(ordered)
    return SampledVisibilityMap(ordered, stats, assignments)


def build_svm_offline(scene: Scene, pixels: PixelSet, engine: QueryEngine,
                      ) -> SampledVisibilityMap:
    """Marking construction: one build per emitted trapezoid."""
    base_counters = dict(engine.counters)
    if isinstance(pixels, PixelGrid):
        marked = bytearray(pixels.count)

        def index_of(q: Point2) -> int:
            ij = pixels.locate_pixel(q)
            if ij is None:
                raise InternalError(f"marked pixel {q} is not a grid point")
            i, j = ij
            return j * pixels.width + i
    else:
        index_map = {(q.x, q.y): k for k, q in enumerate(pixels)}
        marked = bytearray(pixels.count)

        def index_of(q: Point2) -> int:
            return index_map[(q.x, q.y)]

    traps: list[Trapezoid] = []
    keys = set()
    assignments: dict = {}
    builds = 0
    marked_total = 0

    for idx, q in enumerate(pixels):
        if marked[idx]:
            continue
        trap = build_trapezoid(q, engine)
        builds += 1
        key = trap.canonical_key()
        if key in keys:
            raise InternalError(f"rebuilt an already known cell for {q}: {trap}")
        keys.add(key)
        traps.append(trap)
        covered = engine.pixels_in_trapezoid(trap, pixels)
        if not covered:
            raise InternalError(f"cell of {q} reports no pixels: {trap}")
        for p in covered:
            k = index_of(p)
            if marked[k]:
                raise InternalError(
                    f"pixel {p} marked twice; cells are not disjoint"
                )
            marked[k] = 1
            marked_total += 1
            assignments[(p.x, p.y)] = trap.triangle_id

    if marked_total != pixels.count:
        raise InternalError(
            f"marking covered {marked_total} of {pixels.count} pixels"
        )
    stats = {
        "mode": "offline",
        "n": scene.n,
        "p": pixels.count,
        "builds": builds,
        "marked": marked_total,
        "engine": engine.name,
    }
    _merge_counter_delta(stats, engine, base_counters)
    return _finalize(traps, stats, assignments)


def build_svm_online(scene: Scene, pixel_stream: Iterable[Point2],
                     engine: QueryEngine) -> SampledVisibilityMap:
    """Point-location construction over a pixel stream (duplicates allowed)."""
    base_counters = dict(engine.counters)
    locator = TrapezoidLocator()
    assignments: dict = {}
    builds = 0
    hits = 0
    p = 0
    for q in pixel_stream:
        p += 1
        if not scene.viewport.contains_pixel(q):
            raise PreconditionError(f"streamed pixel {q} outside viewport")
        found = locator.query(q)
        if found is None:
            trap = build_trapezoid(q, engine)
            builds += 1
            locator.insert(trap)
            found = trap
        else:
            hits += 1
        assignments[(q.x, q.y)] = found.triangle_id
    stats = {
        "mode": "online",
        "n": scene.n,
        "p": p,
        "builds": builds,
        "locator_hits": hits,
        "locator_queries": locator.stats["queries"],
        "engine": engine.name,
    }
    _merge_counter_delta(stats, engine, base_counters)
    return _finalize(locator.trapezoids, stats, assignments)


def _merge_counter_delta(stats: dict, engine: QueryEngine, base: dict) -> None:
    for op, value in engine.counters.items():
        stats[f"q_{op}"] = value - base.get(op, 0)
