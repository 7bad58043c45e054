"""Symbolic perturbation arithmetic.

Boundary ownership follows one global convention: every query point q is
replaced by q_eps = (x + eps^2, y + eps) as eps -> 0+.  A point on any
non-vertical boundary line then belongs to the cell above it, and a point
on any vertical wall to the cell on the right, with corner ties resolved
by the lexicographic order of the two infinitesimals.

Rather than hand-deriving strict/non-strict predicate variants case by
case, quantities that depend on a perturbed point are carried as 2-jets
a0 + a1*eps + a2*eps^2 with exact rational coefficients; comparisons are
lexicographic.  All geometry here is affine, and only one point of any
predicate is ever perturbed, so jets are closed under everything we need
(no eps*eps products arise).
"""

from __future__ import annotations

from .rational import ZERO, rat


class Eps:
    """a0 + a1*eps + a2*eps^2 with exact rational coefficients."""

    __slots__ = ("a0", "a1", "a2")

    def __init__(self, a0, a1=ZERO, a2=ZERO):
        self.a0 = a0
        self.a1 = a1
        self.a2 = a2

    def __repr__(self):
        return f"Eps({self.a0}, {self.a1}, {self.a2})"

    def _key(self):
        return (self.a0, self.a1, self.a2)

    @staticmethod
    def _coerce(other) -> "Eps":
        if isinstance(other, Eps):
            return other
        return Eps(other)

    def __add__(self, other):
        o = self._coerce(other)
        return Eps(self.a0 + o.a0, self.a1 + o.a1, self.a2 + o.a2)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return Eps(self.a0 - o.a0, self.a1 - o.a1, self.a2 - o.a2)

    def __rsub__(self, other):
        o = self._coerce(other)
        return Eps(o.a0 - self.a0, o.a1 - self.a1, o.a2 - self.a2)

    def __neg__(self):
        return Eps(-self.a0, -self.a1, -self.a2)

    def __mul__(self, scalar):
        if isinstance(scalar, Eps):
            raise TypeError("Eps*Eps products are not defined (affine geometry only)")
        return Eps(self.a0 * scalar, self.a1 * scalar, self.a2 * scalar)

    __rmul__ = __mul__

    def __eq__(self, other):
        return self._key() == self._coerce(other)._key()

    def __lt__(self, other):
        return self._key() < self._coerce(other)._key()

    def __le__(self, other):
        return self._key() <= self._coerce(other)._key()

    def __gt__(self, other):
        return self._key() > self._coerce(other)._key()

    def __ge__(self, other):
        return self._key() >= self._coerce(other)._key()

    def __hash__(self):
        return hash(self._key())

    def sign(self) -> int:
        for c in (self.a0, self.a1, self.a2):
            if c > 0:
                return 1
            if c < 0:
                return -1
        return 0

    def is_zero(self) -> bool:
        return not (self.a0 or self.a1 or self.a2)


class EpsPoint2:
    """A 2D point with jet coordinates (a perturbed query point)."""

    __slots__ = ("x", "y")

    def __init__(self, x: Eps, y: Eps):
        self.x = x
        self.y = y

    def __repr__(self):
        return f"EpsPoint2({self.x!r}, {self.y!r})"


ONE_R = rat(1)


def perturbed(p) -> EpsPoint2:
    """The canonical q_eps = (x + eps^2, y + eps) of a Point2."""
    return EpsPoint2(Eps(p.x, ZERO, ONE_R), Eps(p.y, ONE_R, ZERO))


def eps_const(v) -> Eps:
    return Eps(v)
