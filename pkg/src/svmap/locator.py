"""Semi-dynamic point location over interior-disjoint trapezoids.

Static buckets built by the logarithmic (doubling) method; each bucket is
an x-segment tree whose nodes keep the trapezoids spanning them ordered
vertically (their bands cannot cross within a node's x-range, so a single
comparator position suffices).  Queries walk one root-to-leaf path per
bucket and binary-search each node list, giving measured logarithmic-order
behavior; inserts are amortized by bucket rebuilds.
"""

from __future__ import annotations

import bisect
from typing import Optional

from .errors import InternalError
from .geometry import Point2
from .trapezoid import Trapezoid, contains


class _StaticBucket:
    __slots__ = ("xs", "nodes", "size")

    def __init__(self, traps: list[Trapezoid]):
        self.size = len(traps)
        xs = sorted({t.x_left for t in traps} | {t.x_right for t in traps})
        self.xs = xs
        # segment tree over elementary intervals [xs[i], xs[i+1])
        m = max(1, len(xs) - 1)
        self._m = m
        self.nodes: dict[tuple[int, int], list[Trapezoid]] = {}
        for t in traps:
            lo = bisect.bisect_left(xs, t.x_left)
            hi = bisect.bisect_left(xs, t.x_right)
            self._insert(0, 0, m, lo, hi, t)
        for key, lst in self.nodes.items():
            node_lo, node_hi = key
            mid = (xs[node_lo] + xs[node_hi]) / 2
            lst.sort(key=lambda t: t.bottom.y_at(mid))

    def _insert(self, node, lo, hi, qlo, qhi, t):
        if qlo >= hi or qhi <= lo:
            return
        if qlo <= lo and hi <= qhi:
            self.nodes.setdefault((lo, hi), []).append(t)
            return
        mid = (lo + hi) // 2
        self._insert(2 * node + 1, lo, mid, qlo, qhi, t)
        self._insert(2 * node + 2, mid, hi, qlo, qhi, t)

    def query(self, q: Point2) -> Optional[Trapezoid]:
        xs = self.xs
        if not xs or q.x < xs[0] or q.x >= xs[-1]:
            return None
        leaf = bisect.bisect_right(xs, q.x) - 1
        lo, hi = 0, self._m
        while True:
            lst = self.nodes.get((lo, hi))
            if lst:
                found = self._search_list(lst, q)
                if found is not None:
                    return found
            if hi - lo <= 1:
                return None
            mid = (lo + hi) // 2
            if leaf < mid:
                hi = mid
            else:
                lo = mid

    @staticmethod
    def _search_list(lst: list[Trapezoid], q: Point2) -> Optional[Trapezoid]:
        lo, hi = 0, len(lst)
        while lo < hi:
            mid = (lo + hi) // 2
            t = lst[mid]
            if q.y < t.bottom.y_at(q.x):
                hi = mid
            elif not (q.y < t.top.y_at(q.x)):
                lo = mid + 1
            else:
                return t if contains(t, q) else None
        return None


class TrapezoidLocator:
    """Insert disjoint trapezoids; query the unique one containing a point."""

    def __init__(self):
        self._buckets: list[_StaticBucket] = []
        self._all: list[Trapezoid] = []
        self.stats = {"inserts": 0, "queries": 0, "rebuild_work": 0}

    def __len__(self) -> int:
        return len(self._all)

    @property
    def trapezoids(self) -> list[Trapezoid]:
        return list(self._all)

    def insert(self, trap: Trapezoid) -> None:
        overlap = self._find_overlap(trap)
        if overlap is not None:
            raise InternalError(
                f"locator rejects overlapping insert: {trap} overlaps {overlap}"
            )
        self.stats["inserts"] += 1
        self._all.append(trap)
        carry = [trap]
        while self._buckets and self._buckets[-1].size == len(carry):
            old = self._buckets.pop()
            merged = list(carry)
            self._collect(old, merged)
            carry = merged
        self.stats["rebuild_work"] += len(carry)
        self._buckets.append(_StaticBucket(carry))
        self._buckets.sort(key=lambda b: -b.size)

    @staticmethod
    def _collect(bucket: _StaticBucket, out: list[Trapezoid]) -> None:
        seen = set()
        for lst in bucket.nodes.values():
            for t in lst:
                if id(t) not in seen:
                    seen.add(id(t))
                    out.append(t)

    def query(self, q: Point2) -> Optional[Trapezoid]:
        self.stats["queries"] += 1
        for bucket in self._buckets:
            found = bucket.query(q)
            if found is not None:
                return found
        return None

    def _find_overlap(self, new: Trapezoid) -> Optional[Trapezoid]:
        for t in self._all:
            if t.x_right <= new.x_left or new.x_right <= t.x_left:
                continue
            if _bands_overlap(t, new):
                return t
        return None


def _bands_overlap(a: Trapezoid, b: Trapezoid) -> bool:
    """Do the open regions of two trapezoids share a point?"""
    lo = max(a.x_left, b.x_left)
    hi = min(a.x_right, b.x_right)
    if not lo < hi:
        return False
    # gap(x) = min(tops) - max(bottoms) is concave piecewise linear; its
    # maximum over [lo, hi] is at an endpoint or a line-crossing breakpoint.
    xs = [lo, hi]
    for l1 in (a.top, a.bottom):
        for l2 in (b.top, b.bottom):
            if l1.m != l2.m:
                x = (l2.k - l1.k) / (l1.m - l2.m)
                if lo < x < hi:
                    xs.append(x)
    for x in xs:
        gap = min(a.top.y_at(x), b.top.y_at(x)) - max(
            a.bottom.y_at(x), b.bottom.y_at(x)
        )
        if gap > 0:
            if x == lo or x == hi:
                # positive gap at a closed end extends into the open interval
                return True
            return True
    return False
