"""Exact rational plane geometry.

Coordinates are :class:`fractions.Fraction` values.  Nothing here resolves a
degenerate configuration; touching endpoints, collinear overlaps and rays that
graze a vertex raise :class:`Degenerate` so the caller can perturb.
"""
from fractions import Fraction
from typing import NamedTuple, Optional, Tuple, Union

Rat = Fraction
RatLike = Union[int, str, Fraction]


class Degenerate(ValueError):
    """Raised for non-generic configurations (caller must perturb)."""


def rat(value: RatLike) -> Fraction:
    """Parse an int, a Fraction or a ``"p/q"`` string into a Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, float):
        raise TypeError("floating point coordinates are not accepted: %r" % value)
    return Fraction(value)


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: RatLike, y: RatLike) -> "Point":
        return cls(rat(x), rat(y))

    def __sub__(self, other):
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other):
        return Point(self.x + other.x, self.y + other.y)

    def scale(self, t) -> "Point":
        return Point(self.x * t, self.y * t)

    def __repr__(self):
        return "Point(%s, %s)" % (self.x, self.y)


class Seg(NamedTuple):
    a: Point
    b: Point

    @classmethod
    def of(cls, a, b) -> "Seg":
        a = a if isinstance(a, Point) else Point.of(*a)
        b = b if isinstance(b, Point) else Point.of(*b)
        if a == b:
            raise ValueError("degenerate segment %r" % (a,))
        return cls(a, b)

    @property
    def direction(self) -> Point:
        return self.b - self.a

    def at(self, t) -> Point:
        return self.a + (self.b - self.a).scale(t)

    def is_vertical(self) -> bool:
        return self.a.x == self.b.x


def cross(u: Point, v: Point) -> Fraction:
    """z-component of ``u x v`` (the determinant ``det(u, v)``)."""
    return u.x * v.y - u.y * v.x


def lerp(p: Point, q: Point, t) -> Point:
    return Point(p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t)


def _boxes_disjoint(s: Seg, t: Seg) -> bool:
    if max(s.a.x, s.b.x) < min(t.a.x, t.b.x) or max(t.a.x, t.b.x) < min(s.a.x, s.b.x):
        return True
    return max(s.a.y, s.b.y) < min(t.a.y, t.b.y) or max(t.a.y, t.b.y) < min(s.a.y, s.b.y)


def seg_params(s: Seg, t: Seg) -> Optional[Tuple[Fraction, Fraction]]:
    """Parameters ``(u, v)`` with ``s.at(u) == t.at(v)`` for a transversal crossing.

    Returns None when the segments miss each other.  Raises Degenerate when they
    touch at an endpoint or overlap collinearly.
    """
    if _boxes_disjoint(s, t):
        return None
    d1, d2 = s.direction, t.direction
    w = t.a - s.a
    denom = cross(d1, d2)
    if denom == 0:
        if cross(w, d1) != 0:
            return None
        # collinear: compare projections onto d1
        dd = d1.x * d1.x + d1.y * d1.y
        t0 = (w.x * d1.x + w.y * d1.y) / dd
        wb = t.b - s.a
        t1 = (wb.x * d1.x + wb.y * d1.y) / dd
        lo, hi = min(t0, t1), max(t0, t1)
        if hi < 0 or lo > 1:
            return None
        raise Degenerate("collinear segments %r and %r touch or overlap" % (s, t))
    u = cross(w, d2) / denom
    v = cross(w, d1) / denom
    if u < 0 or u > 1 or v < 0 or v > 1:
        return None
    if u in (0, 1) or v in (0, 1):
        raise Degenerate("segments %r and %r meet at an endpoint" % (s, t))
    return u, v


def seg_intersect(s: Seg, t: Seg) -> Optional[Point]:
    """Unique interior transversal intersection point of two segments, if any."""
    params = seg_params(s, t)
    if params is None:
        return None
    return s.at(params[0])


def ray_down_hits(origin: Point, s: Seg) -> Optional[Tuple[Point, Fraction]]:
    """Where the open downward vertical ray from ``origin`` crosses ``s``.

    Returns ``(hit_point, hit_y)`` or None.  Hits at the origin itself, at an
    endpoint of ``s`` or along a vertical ``s`` raise Degenerate.
    """
    lo_x, hi_x = min(s.a.x, s.b.x), max(s.a.x, s.b.x)
    if origin.x < lo_x or origin.x > hi_x:
        return None
    if s.is_vertical():
        if min(s.a.y, s.b.y) < origin.y:
            raise Degenerate("vertical segment %r under the ray from %r" % (s, origin))
        return None
    for end in (s.a, s.b):
        if end.x == origin.x:
            if end.y < origin.y:
                raise Degenerate("ray from %r passes through vertex %r" % (origin, end))
            if end.y == origin.y:
                raise Degenerate("ray origin %r is an endpoint of %r" % (origin, s))
            return None
    t = (origin.x - s.a.x) / (s.b.x - s.a.x)
    y = s.a.y + (s.b.y - s.a.y) * t
    if y == origin.y:
        raise Degenerate("ray origin %r lies on %r" % (origin, s))
    if y > origin.y:
        return None
    return Point(origin.x, y), y
