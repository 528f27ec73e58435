"""Long knot diagrams: crossings, bridges, bridge vertices and vertical lines.

A diagram is a rational polyline listed from right infinity to left infinity.
The first and last segments are horizontal rays; internally they are cut at
``x = +/-BIG`` where BIG lies beyond the bounding box, which is exact for every
test we run on them.

A *piece* is the part of one polyline segment between consecutive crossings
on it; diagram segments (the things elements are assigned to) are runs of
pieces between crossings.  A bridge vertex lies inside the last piece of its
bridge and does not split it.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .exactgeom import Degenerate, Point, Seg, cross, rat, ray_down_hits, seg_params

FIRST, SECOND = "first", "second"
MIN_BIG = 10 ** 6


class DiagramError(ValueError):
    """Malformed diagram input (not a degeneracy)."""


class NotAKnot(ValueError):
    """The braid closure has more than one component."""


# ---------------------------------------------------------------- braid words

@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        for x in self.letters:
            if x == 0 or abs(x) > self.strands - 1:
                raise ValueError("letter %d is illegal on %d strands" % (x, self.strands))

    def __len__(self):
        return len(self.letters)

    def permutation(self) -> List[int]:
        """perm[p] = position where the strand entering at position p leaves (0-based)."""
        perm = list(range(self.strands))
        for x in self.letters:
            i = abs(x) - 1
            perm = [i + 1 if p == i else i if p == i + 1 else p for p in perm]
        return perm

    def is_knot(self) -> bool:
        perm, p, seen = self.permutation(), 0, 0
        while True:
            p = perm[p]
            seen += 1
            if p == 0:
                return seen == self.strands

    def __str__(self):
        return "BraidWord(%d, [%s])" % (self.strands, ", ".join(map(str, self.letters)))


# -------------------------------------------------------------- diagram types

@dataclass(frozen=True)
class Piece:
    """A diagram segment: the part of polyline segment ``seg`` between params t0 < t1."""
    index: int
    seg: int
    t0: Fraction
    t1: Fraction


@dataclass(frozen=True)
class Crossing:
    index: int
    position: Point
    over_seg: int
    over_t: Fraction
    under_seg: int
    under_t: Fraction
    # sign of det(under_direction, over_direction); -1 is a positive crossing
    chirality: int
    over_in: int = -1
    over_out: int = -1
    under_in: int = -1
    under_out: int = -1


@dataclass(frozen=True)
class Bridge:
    index: int
    pieces: Tuple[int, ...]
    begin: Optional[int]  # crossing index, None = right infinity
    end: Optional[int]    # crossing index, None = left infinity


@dataclass(frozen=True)
class VerticalLine:
    owner_bridge: int
    origin: Point
    associated_crossing: int
    hits: Tuple[Tuple[int, Point], ...]  # (piece id, point), bottom-up
    vertex_counted: bool

    @property
    def k(self) -> int:
        return len(self.hits)


def detect_crossings(pts: Sequence[Point]):
    """Polyline segments (infinite ends cut at +/-big) and sorted crossings.

    Crossings are ``(point, i, t_i, j, t_j)`` with i < j, sorted by (x, y).
    """
    if not pts:
        raise DiagramError("a diagram needs at least one point")
    coords = [abs(c) for p in pts for c in p]
    big = max([MIN_BIG] + [2 * c + 1 for c in coords])
    first, last = pts[0], pts[-1]
    segs = [Seg(Point(Fraction(big), first.y), first)]
    segs += [Seg.of(a, b) for a, b in zip(pts, pts[1:])]
    segs.append(Seg(last, Point(Fraction(-big), last.y)))
    for s in segs:
        if s.is_vertical():
            raise Degenerate("vertical segment %r" % (s,))
    for s, t in zip(segs, segs[1:]):
        d1, d2 = s.direction, t.direction
        if cross(d1, d2) == 0 and d1.x * d2.x + d1.y * d2.y < 0:
            raise Degenerate("polyline folds back at %r" % (s.b,))
    found = []
    # sweep by x: only segments with overlapping x ranges can cross
    xr = [(min(s.a.x, s.b.x), max(s.a.x, s.b.x)) for s in segs]
    order = sorted(range(len(segs)), key=lambda k: xr[k][0])
    for pos, a in enumerate(order):
        for b in order[pos + 1:]:
            if xr[b][0] > xr[a][1]:
                break
            i, j = min(a, b), max(a, b)
            if j - i < 2:
                continue
            params = seg_params(segs[i], segs[j])
            if params is not None:
                found.append((segs[i].at(params[0]), i, params[0], j, params[1]))
    found.sort(key=lambda c: (c[0].x, c[0].y))
    for a, b in zip(found, found[1:]):
        if a[0] == b[0]:
            raise Degenerate("two crossings coincide at %r" % (a[0],))
    return big, segs, found


class LongDiagram:
    """Validated long knot diagram with detected crossings and pieces.

    ``over[i]`` resolves the i-th crossing in lexicographic ``(x, y)`` order:
    ``"first"`` means the earlier-visited polyline segment passes over.
    """

    def __init__(self, points: Sequence, over: Sequence[str], _detected=None):
        pts = [p if isinstance(p, Point) else Point.of(*p) for p in points]
        self.points: Tuple[Point, ...] = tuple(pts)
        self.big, segs, found = _detected or detect_crossings(pts)
        self.segments: Tuple[Seg, ...] = tuple(segs)
        self.x_ranges = tuple((min(s.a.x, s.b.x), max(s.a.x, s.b.x)) for s in segs)
        over = list(over)
        if len(over) != len(found):
            raise DiagramError("%d crossings detected but %d resolutions given"
                               % (len(found), len(over)))
        for o in over:
            if o not in (FIRST, SECOND):
                raise DiagramError("resolution must be 'first' or 'second', got %r" % (o,))
        self.over: Tuple[str, ...] = tuple(over)

        raw = []
        for idx, ((pos, i, ti, j, tj), o) in enumerate(zip(found, over)):
            (os_, ot), (us, ut) = ((i, ti), (j, tj)) if o == FIRST else ((j, tj), (i, ti))
            ch = cross(segs[us].direction, segs[os_].direction)
            raw.append(Crossing(idx, pos, os_, ot, us, ut, 1 if ch > 0 else -1))

        events: Dict[int, List[Tuple[Fraction, int]]] = {k: [] for k in range(len(segs))}
        for c in raw:
            events[c.over_seg].append((c.over_t, c.index))
            events[c.under_seg].append((c.under_t, c.index))
        pieces: List[Piece] = []
        ends: Dict[Tuple[int, int], int] = {}  # (crossing, seg) -> piece ending there
        for k in range(len(segs)):
            t_prev = Fraction(0)
            for t, cidx in sorted(events[k]):
                pieces.append(Piece(len(pieces), k, t_prev, t))
                ends[(cidx, k)] = len(pieces) - 1
                t_prev = t
            pieces.append(Piece(len(pieces), k, t_prev, Fraction(1)))
        self.pieces: Tuple[Piece, ...] = tuple(pieces)
        self.crossings: Tuple[Crossing, ...] = tuple(
            Crossing(c.index, c.position, c.over_seg, c.over_t, c.under_seg, c.under_t,
                     c.chirality,
                     over_in=ends[(c.index, c.over_seg)],
                     over_out=ends[(c.index, c.over_seg)] + 1,
                     under_in=ends[(c.index, c.under_seg)],
                     under_out=ends[(c.index, c.under_seg)] + 1)
            for c in raw)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def piece_at(self, seg: int, t: Fraction) -> int:
        """Piece of polyline segment ``seg`` containing the interior parameter ``t``."""
        for p in self.pieces:
            if p.seg == seg and p.t0 < t < p.t1:
                return p.index
        raise Degenerate("parameter %s on segment %d is a crossing" % (t, seg))

    def piece_direction(self, piece: int) -> Point:
        return self.segments[self.pieces[piece].seg].direction

    def writhe(self) -> int:
        return -sum(c.chirality for c in self.crossings)

    def flipped(self) -> "LongDiagram":
        """Same polyline with every crossing resolution switched."""
        return LongDiagram(self.points, [SECOND if o == FIRST else FIRST for o in self.over])

    def to_spec(self) -> dict:
        return {"points": [[_fmt(p.x), _fmt(p.y)] for p in self.points],
                "over": list(self.over)}

    def __repr__(self):
        return "LongDiagram(%d points, %d crossings)" % (len(self.points), self.n_crossings)


def _fmt(q: Fraction):
    return q.numerator if q.denominator == 1 else "%d/%d" % (q.numerator, q.denominator)


def parse_diagram(spec: dict) -> LongDiagram:
    """Build a diagram from a DiagramSpec mapping (``points`` and ``over``)."""
    if not isinstance(spec, dict) or "points" not in spec:
        raise DiagramError("diagram spec must be an object with a 'points' list")
    try:
        points = [Point(rat(x), rat(y)) for x, y in spec["points"]]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise DiagramError("bad point list: %s" % exc) from None
    return LongDiagram(points, spec.get("over", []))


# ---------------------------------------------------------------- bridges

def decompose_bridges(d: LongDiagram) -> List[Bridge]:
    """Split the pieces into maximal over-passing paths, in diagram order."""
    under_end = {c.under_in: c.index for c in d.crossings}
    bridges, current, begin = [], [], None
    for p in d.pieces:
        current.append(p.index)
        if p.index in under_end:
            bridges.append(Bridge(len(bridges), tuple(current), begin, under_end[p.index]))
            current, begin = [], under_end[p.index]
    bridges.append(Bridge(len(bridges), tuple(current), begin, None))
    assert len(bridges) == d.n_crossings + 1
    return bridges


def bridge_of_pieces(d: LongDiagram, bridges: Sequence[Bridge]) -> List[int]:
    owner = [0] * len(d.pieces)
    for b in bridges:
        for p in b.pieces:
            owner[p] = b.index
    return owner


# ------------------------------------------------------- vertices and lines

def farey_schedule() -> Iterator[Fraction]:
    """1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ... : reduced fractions by denominator."""
    q = 2
    while True:
        for p in range(1, q):
            if gcd(p, q) == 1:
                yield Fraction(p, q)
        q += 1


MAX_SCHEDULE = 400


def _ray_hits(d: LongDiagram, origin: Point, own_seg: int) -> List[Tuple[int, Point]]:
    hits = []
    for k, s in enumerate(d.segments):
        if k == own_seg or not d.x_ranges[k][0] <= origin.x <= d.x_ranges[k][1]:
            continue
        h = ray_down_hits(origin, s)
        if h is not None:
            t = (origin.x - s.a.x) / (s.b.x - s.a.x)
            hits.append((h[1], d.piece_at(k, t), h[0]))
    hits.sort(key=lambda h: h[0])
    for a, b in zip(hits, hits[1:]):
        if a[0] == b[0]:
            raise Degenerate("ray from %r passes through a crossing" % (origin,))
    return [(piece, pt) for _, piece, pt in hits]


def vertex_point(d: LongDiagram, piece: int, tau: Fraction) -> Point:
    """Point at fraction ``tau`` of the way from the piece's end back to its start."""
    p = d.pieces[piece]
    s = d.segments[p.seg]
    return s.at(p.t1 + tau * (p.t0 - p.t1))


def place_bridge_vertices(d: LongDiagram, bridges: Sequence[Bridge], restart: int = 0,
                          params: Optional[Dict[int, Fraction]] = None) -> Dict[int, Point]:
    """Generic bridge vertices on the last piece of every bridge but the left-infinite one.

    Each vertex walks the Farey schedule (skipping the first ``restart`` values);
    ``params`` pins the parameter of selected bridges instead.
    """
    params = params or {}
    taken_x = {c.position.x for c in d.crossings}
    vertices: Dict[int, Point] = {}
    for b in bridges[:-1]:
        piece = b.pieces[-1]
        own = d.pieces[piece].seg
        if b.index in params:
            candidates = iter([Fraction(params[b.index])])
        else:
            candidates = farey_schedule()
            for _ in range(restart):
                next(candidates)
        for attempt, tau in enumerate(candidates):
            if attempt >= MAX_SCHEDULE:
                break
            v = vertex_point(d, piece, tau)
            if v.x in taken_x:
                continue
            try:
                _ray_hits(d, v, own)
            except Degenerate:
                continue
            vertices[b.index] = v
            taken_x.add(v.x)
            break
        if b.index not in vertices:
            raise Degenerate("no generic bridge vertex found for bridge %d" % b.index)
    return vertices


def shoot_vertical_lines(d: LongDiagram, bridges: Sequence[Bridge],
                         vertices: Dict[int, Point]) -> List[VerticalLine]:
    lines = []
    for b in bridges[:-1]:
        v = vertices[b.index]
        piece = b.pieces[-1]
        hits = _ray_hits(d, v, d.pieces[piece].seg)
        # the ray (0,-1) departs to the right of the direction iff direction x (0,-1) < 0
        counted = cross(d.piece_direction(piece), Point(Fraction(0), Fraction(-1))) < 0
        if counted:
            hits.append((piece, v))
        lines.append(VerticalLine(b.index, v, b.end, tuple(hits), counted))
    return lines


@dataclass
class Decorated:
    """A diagram together with its bridges, bridge vertices and vertical lines."""
    diagram: LongDiagram
    bridges: List[Bridge]
    vertices: Dict[int, Point]
    lines: List[VerticalLine]
    owner: List[int] = field(default_factory=list)


def decorate(d: LongDiagram, restart: int = 0,
             params: Optional[Dict[int, Fraction]] = None) -> Decorated:
    bridges = decompose_bridges(d)
    vertices = place_bridge_vertices(d, bridges, restart=restart, params=params)
    lines = shoot_vertical_lines(d, bridges, vertices)
    return Decorated(d, bridges, vertices, lines, bridge_of_pieces(d, bridges))


# ------------------------------------------------------------ braid layout

LAYOUTS = ("left", "right")


def _layout_path(b: BraidWord, layout: str = "left"):
    """Unsheared polyline of the long closure and the crossing visits in path order.

    Strands sit at heights 1..n.  In the ``"left"`` layout they travel right to
    left and letter k occupies the column between x = L-k and x = L-k-1; the
    bottom position is cut open and runs off to both infinities while the other
    positions close over the top.  The ``"right"`` layout traverses the braid
    left to right instead; reaching the infinities then costs one extra
    (Reidemeister I) crossing below the braid, reported as column ``-1``.

    Returns ``(points, visits, first_over)`` where ``visits`` lists the column of
    each crossing visit in path order and ``first_over[col]`` says whether the
    earlier visit of that column passes over.
    """
    if layout not in LAYOUTS:
        raise ValueError("unknown layout %r" % (layout,))
    n, L = b.strands, len(b.letters)
    step = -1 if layout == "left" else 1
    x0 = L if layout == "left" else 0
    pts: List[Tuple[Fraction, Fraction]] = []
    visits: List[int] = []
    dirs: Dict[int, List[Tuple[int, int]]] = {}
    if layout == "left":
        pts.append((L, 1))
    else:
        pts += [(L + n + 2, -1), (-(n + 1), -1), (-(n + 1), 1), (0, 1)]
    pos = 1
    while True:
        for k, x in enumerate(b.letters):
            i = abs(x)
            xa = x0 + step * k
            if pos in (i, i + 1):
                visits.append(k)
                dirs.setdefault(k, []).append((step, 1 if pos == i else -1))
                pts.append((xa + Fraction(step, 2), Fraction(2 * i + 1, 2)))
                pos = i + 1 if pos == i else i
            pts.append((xa + step, pos))
        if pos == 1:
            break
        o = n - pos + 1
        far, near = x0 + step * (L + o), x0 - step * o
        pts += [(far, pos), (far, n + o), (near, n + o), (near, pos), (x0, pos)]
    if layout == "right":
        pts += [(L + n + 1, 1), (L + n + 1, -2)]
        visits.append(-1)
    first_over = {}
    for k, x in enumerate(b.letters):
        (ax, ay), (bx, by) = dirs[k]
        # positive letters are positive crossings: det(over, under) > 0
        first_over[k] = (ax * by - ay * bx > 0) == (x > 0)
    if layout == "right":
        visits.insert(0, -1)
    return _drop_collinear(pts), visits, first_over


def _drop_collinear(pts):
    pts = [Point(Fraction(x), Fraction(y)) for x, y in pts]
    out = [pts[0]]
    for p in pts[1:]:
        if p == out[-1]:
            continue
        if len(out) >= 2 and cross(out[-1] - out[-2], p - out[-1]) == 0:
            out[-1] = p
        else:
            out.append(p)
    return out


def braid_to_diagram(b: BraidWord, layout: str = "left", kink_over: str = FIRST,
                     shear_start: int = 1000) -> LongDiagram:
    """Grid realization of the long closure of ``b``, sheared until generic."""
    return braid_to_decorated(b, layout=layout, kink_over=kink_over,
                              shear_start=shear_start).diagram


def braid_to_decorated(b: BraidWord, layout: str = "left", kink_over: str = FIRST,
                       shear_start: int = 1000, restart: int = 0) -> Decorated:
    """:func:`braid_to_diagram` plus bridges, vertices and vertical lines."""
    if not b.is_knot():
        raise NotAKnot("closure of %s has more than one component" % (b,))
    base, visits, first_over = _layout_path(b, layout)
    first_over[-1] = kink_over == FIRST
    last_err = None
    for N in range(shear_start, shear_start + 1000):
        pts = [Point(p.x + p.y / N, p.y) for p in base]
        try:
            d = _resolve(pts, visits, first_over)
            return decorate(d, restart=restart)
        except Degenerate as exc:
            last_err = exc
    raise Degenerate("could not make the layout of %s generic: %s" % (b, last_err))


def _resolve(pts, visits, first_over) -> LongDiagram:
    detected = detect_crossings(pts)
    found = detected[2]
    if 2 * len(found) != len(visits):
        raise Degenerate("layout produced %d crossings, expected %d"
                         % (len(found), len(visits) // 2))
    # the r-th crossing visit along the path is the r-th visit recorded by the layout
    order = sorted([((i, ti), m) for m, (_, i, ti, _, _) in enumerate(found)]
                   + [((j, tj), m) for m, (_, _, _, j, tj) in enumerate(found)])
    first_rank = {}
    for rank, (_, m) in enumerate(order):
        first_rank.setdefault(m, rank)
    over = [FIRST if first_over[visits[first_rank[m]]] else SECOND for m in range(len(found))]
    return LongDiagram(pts, over, _detected=detected)
