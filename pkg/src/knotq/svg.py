"""Deterministic SVG render of a decorated long diagram.

Bridges are colored, under-passes are drawn with a gap, bridge vertices are
large dots and crossing vertices small ones, each vertical line shows its
intersection indices, and every diagram segment carries its element label.
Output depends only on the input, so renders can be compared byte for byte.
"""
from fractions import Fraction
from typing import List, Optional, Sequence
from xml.sax.saxutils import escape

from .action import Assignment, admissible_assignment
from .diagram import Decorated
from .exactgeom import Point, cross

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")
SCALE = 90.0
MARGIN = 1.0
GAP = 0.12  # half-width of the under-pass gap, in diagram units


def _element_label(e, names: Optional[Sequence[str]]) -> str:
    name = names[e.bridge] if names else "x%d" % e.bridge
    if e.m == 0:
        return name
    mag = "" if abs(e.m) == 1 else str(abs(e.m))
    return "%s%s%sε" % (name, "+" if e.m > 0 else "-", mag)


def render_svg(dec: Decorated, assignment: Optional[Assignment] = None,
               names: Optional[Sequence[str]] = None) -> str:
    d = dec.diagram
    a = assignment or admissible_assignment(dec)
    finite = list(d.points[1:-1]) or [Point(Fraction(0), Fraction(0))]
    finite += list(dec.vertices.values())
    xmin = min(p.x for p in finite) - MARGIN
    xmax = max(p.x for p in finite) + MARGIN
    ymax = max(p.y for p in finite) + MARGIN
    ymin = min(min(p.y for p in finite), min((h.y for ln in dec.lines for _, h in ln.hits),
                                             default=ymax)) - MARGIN
    width, height = float(xmax - xmin) * SCALE, float(ymax - ymin) * SCALE

    def X(x) -> str:
        return "%.2f" % (float(min(max(x, xmin), xmax) - xmin) * SCALE)

    def Y(y) -> str:
        return "%.2f" % (float(ymax - y) * SCALE)

    under_start = {c.under_out for c in d.crossings}
    under_end = {c.under_in for c in d.crossings}
    out: List[str] = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%.2f" height="%.2f" '
        'viewBox="0 0 %.2f %.2f">' % (width, height, width, height),
        '<rect width="100%" height="100%" fill="white"/>',
        '<g id="pieces" stroke-width="2.5" fill="none" stroke-linecap="round">',
    ]
    # a bridge runs between two under-passes, so it is drawn as one unbroken polyline
    for br in dec.bridges:
        pts: List[Point] = []
        for i in br.pieces:
            piece = d.pieces[i]
            seg = d.segments[piece.seg]
            length = abs(seg.b.x - seg.a.x) + abs(seg.b.y - seg.a.y)
            trim = Fraction(GAP) / length * 2
            t0 = piece.t0 + (trim if i in under_start else 0)
            t1 = piece.t1 - (trim if i in under_end else 0)
            for t in (t0, t1):
                c = seg.at(t)
                c = Point(min(max(c.x, xmin), xmax), c.y)
                if pts and pts[-1] == c:
                    continue
                if len(pts) >= 2 and cross(pts[-1] - pts[-2], c - pts[-1]) == 0:
                    pts[-1] = c
                else:
                    pts.append(c)
        color = PALETTE[br.index % len(PALETTE)]
        out.append('<polyline points="%s" stroke="%s"/>'
                   % (" ".join("%s,%s" % (X(c.x), Y(c.y)) for c in pts), color))
    out.append("</g>")

    out.append('<g id="lines" stroke="black" stroke-width="0.8" stroke-dasharray="4,3">')
    for ln in dec.lines:
        out.append('<line x1="%s" y1="%s" x2="%s" y2="%s"/>'
                   % (X(ln.origin.x), Y(ln.origin.y), X(ln.origin.x), Y(ymin)))
    out.append("</g>")

    out.append('<g id="hits" font-family="sans-serif" font-size="11" fill="black">')
    for ln in dec.lines:
        for k, (_, h) in enumerate(ln.hits, start=1):
            out.append('<circle cx="%s" cy="%s" r="2"/><text x="%.2f" y="%.2f">%d</text>'
                       % (X(h.x), Y(h.y), float(X(h.x)) + 4, float(Y(h.y)) + 12, k))
    out.append("</g>")

    out.append('<g id="vertices">')
    for c in d.crossings:
        out.append('<circle cx="%s" cy="%s" r="3" fill="black"/>'
                   % (X(c.position.x), Y(c.position.y)))
    for b in sorted(dec.vertices):
        v = dec.vertices[b]
        out.append('<circle cx="%s" cy="%s" r="5" fill="%s" stroke="black"/>'
                   % (X(v.x), Y(v.y), PALETTE[b % len(PALETTE)]))
    out.append("</g>")

    out.append('<g id="labels" font-family="serif" font-size="13" fill="black">')
    seen = set()
    for piece in d.pieces:
        e = a[piece.index]
        key = (e, piece.seg)
        if key in seen:
            continue
        seen.add(key)
        seg = d.segments[piece.seg]
        p, q = seg.at(piece.t0), seg.at(piece.t1)
        mx = (float(X(p.x)) + float(X(q.x))) / 2
        my = (float(Y(p.y)) + float(Y(q.y))) / 2
        out.append('<text x="%.2f" y="%.2f">%s</text>'
                   % (mx + 3, my - 5, escape(_element_label(e, names))))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
