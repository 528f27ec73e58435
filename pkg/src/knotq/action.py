"""Admissible assignments, auxiliary forms and the action functional.

Every diagram segment carries an element ``x + m*eps`` where ``x`` is the
variable of its bridge.  ``eps`` is substituted by the exact rational 1/2 when
forms are built, so everything downstream lives over the rationals.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .diagram import Crossing, Decorated

EPS = Fraction(1, 2)


class AssignmentError(RuntimeError):
    """An assignment could not be completed consistently (a construction bug)."""


class Element(NamedTuple):
    bridge: int
    m: int

    def shifted(self, dm: int) -> "Element":
        return Element(self.bridge, self.m + dm)


# ------------------------------------------------------------------ forms

class LinearForm:
    """Integer-coefficient linear form in bridge variables plus a rational constant."""

    __slots__ = ("coeffs", "constant")

    def __init__(self, coeffs: Optional[Mapping[int, int]] = None, constant=0):
        self.coeffs: Dict[int, int] = {b: c for b, c in (coeffs or {}).items() if c}
        self.constant = Fraction(constant)

    @classmethod
    def of_element(cls, e: Element, eps=EPS) -> "LinearForm":
        return cls({e.bridge: 1}, e.m * eps)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        out = dict(self.coeffs)
        for b, c in other.coeffs.items():
            out[b] = out.get(b, 0) + c
        return LinearForm(out, self.constant + other.constant)

    def __neg__(self) -> "LinearForm":
        return LinearForm({b: -c for b, c in self.coeffs.items()}, -self.constant)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def scale(self, k: int) -> "LinearForm":
        return LinearForm({b: k * c for b, c in self.coeffs.items()}, k * self.constant)

    def __eq__(self, other):
        return (isinstance(other, LinearForm) and self.coeffs == other.coeffs
                and self.constant == other.constant)

    def __hash__(self):
        return hash((tuple(sorted(self.coeffs.items())), self.constant))

    def evaluate(self, x: Sequence) -> Fraction:
        return self.constant + sum(c * x[b] for b, c in self.coeffs.items())

    def coefficient_sum(self) -> int:
        return sum(self.coeffs.values())

    def __mul__(self, other: "LinearForm") -> "QuadraticForm":
        quad: Dict[Tuple[int, int], Fraction] = {}
        lin: Dict[int, Fraction] = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                key = (a, b) if a <= b else (b, a)
                quad[key] = quad.get(key, 0) + ca * cb
        for a, ca in self.coeffs.items():
            lin[a] = lin.get(a, 0) + ca * other.constant
        for b, cb in other.coeffs.items():
            lin[b] = lin.get(b, 0) + cb * self.constant
        return QuadraticForm(quad, lin, self.constant * other.constant)

    def __repr__(self):
        return "LinearForm(%s)" % format_form(self.coeffs, {}, self.constant)


class QuadraticForm:
    """Exact quadratic polynomial in bridge variables.

    ``quad`` maps ``(i, j)`` with ``i <= j`` to the coefficient of the monomial
    ``x_i * x_j``.
    """

    __slots__ = ("quad", "lin", "constant")

    def __init__(self, quad=None, lin=None, constant=0):
        self.quad: Dict[Tuple[int, int], Fraction] = {}
        for (i, j), c in (quad or {}).items():
            key = (i, j) if i <= j else (j, i)
            self.quad[key] = self.quad.get(key, 0) + Fraction(c)
        self.quad = {k: v for k, v in self.quad.items() if v}
        self.lin: Dict[int, Fraction] = {b: Fraction(c) for b, c in (lin or {}).items() if c}
        self.constant = Fraction(constant)

    @classmethod
    def zero(cls) -> "QuadraticForm":
        return cls()

    @classmethod
    def sum(cls, forms) -> "QuadraticForm":
        quad: Dict[Tuple[int, int], Fraction] = {}
        lin: Dict[int, Fraction] = {}
        constant = Fraction(0)
        for f in forms:
            for k, v in f.quad.items():
                quad[k] = quad.get(k, 0) + v
            for k, v in f.lin.items():
                lin[k] = lin.get(k, 0) + v
            constant += f.constant
        return cls(quad, lin, constant)

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        quad = dict(self.quad)
        for k, v in other.quad.items():
            quad[k] = quad.get(k, 0) + v
        lin = dict(self.lin)
        for k, v in other.lin.items():
            lin[k] = lin.get(k, 0) + v
        return QuadraticForm(quad, lin, self.constant + other.constant)

    def scale(self, k) -> "QuadraticForm":
        return QuadraticForm({a: k * v for a, v in self.quad.items()},
                             {a: k * v for a, v in self.lin.items()}, k * self.constant)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (isinstance(other, QuadraticForm) and self.quad == other.quad
                and self.lin == other.lin and self.constant == other.constant)

    def is_zero(self) -> bool:
        return not self.quad and not self.lin and not self.constant

    def evaluate(self, x: Sequence) -> Fraction:
        total = self.constant
        for (i, j), c in self.quad.items():
            total += c * x[i] * x[j]
        for i, c in self.lin.items():
            total += c * x[i]
        return total

    def symmetric_matrix(self, size: int) -> List[List[Fraction]]:
        """Matrix ``A`` with ``x^T A x`` equal to the quadratic part."""
        a = [[Fraction(0)] * size for _ in range(size)]
        for (i, j), c in self.quad.items():
            if i == j:
                a[i][i] += c
            else:
                a[i][j] += c / 2
                a[j][i] += c / 2
        return a

    def variables(self):
        out = set(self.lin)
        for i, j in self.quad:
            out.update((i, j))
        return sorted(out)

    def __repr__(self):
        return "QuadraticForm(%s)" % format_form(self.lin, self.quad, self.constant)


def _name(names, b):
    return names[b] if names else "x%d" % b


def format_form(lin, quad=None, constant=0, names=None) -> str:
    """Canonically ordered text rendering (quadratic monomials first)."""
    terms = []
    for (i, j), c in sorted((quad or {}).items()):
        mono = "%s^2" % _name(names, i) if i == j else "%s*%s" % (_name(names, i), _name(names, j))
        terms.append((c, mono))
    for i, c in sorted(lin.items()):
        terms.append((c, _name(names, i)))
    if constant:
        terms.append((Fraction(constant), ""))
    if not terms:
        return "0"
    out = []
    for c, mono in terms:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = mono if (mag == 1 and mono) else (str(mag) + ("*" + mono if mono else ""))
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += " %s %s" % (sign, body)
    return text


# -------------------------------------------------------------- assignment

@dataclass
class Assignment:
    """Element per piece, indexed by piece id.

    A diagram segment is a run of pieces between two crossings (or a crossing
    and an infinity); its element is stored on every piece of the run.
    """
    elements: List[Element]

    def __getitem__(self, piece: int) -> Element:
        return self.elements[piece]

    def __len__(self):
        return len(self.elements)


def _over_step(c: Crossing) -> int:
    # the over piece on the left of the under direction is eps larger; with
    # chirality -1 that is the incoming piece
    return -1 if c.chirality < 0 else 1


def admissible_assignment(dec: Decorated,
                          entry: Optional[Callable[[int, int], int]] = None) -> Assignment:
    """Admissible assignment built piece by piece along the orientation.

    ``entry(bridge, m_last)`` may choose the entry offset of each bridge other
    than the two infinite ones; it must return an integer of parity opposite to
    ``m_last``.  By default the offset is taken from {0, 1}.
    """
    d, bridges = dec.diagram, dec.bridges
    over_at = {}
    for c in d.crossings:
        over_at[c.over_in] = c
    m = [None] * len(d.pieces)
    last = bridges[-1]
    # left-infinite bridge: fixed from its final (infinite) piece backwards
    m[last.pieces[-1]] = 0
    for a, b in zip(reversed(last.pieces[:-1]), reversed(last.pieces[1:])):
        c = over_at.get(a)
        m[a] = m[b] - (0 if c is None else _over_step(c))
    for br in bridges[:-1]:
        if br.index == 0:
            cur = 0
        else:
            prev = m[bridges[br.index - 1].pieces[-1]]
            cur = (1 - prev % 2) if entry is None else entry(br.index, prev)
            if (cur + prev) % 2 != 1:
                raise AssignmentError("entry offset %d does not fix parity" % cur)
        m[br.pieces[0]] = cur
        for a, b in zip(br.pieces, br.pieces[1:]):
            c = over_at.get(a)
            m[b] = m[a] + (0 if c is None else _over_step(c))
    if len(bridges) > 1:
        junction = m[bridges[-2].pieces[-1]] + m[last.pieces[0]]
        if junction % 2 != 1:
            raise AssignmentError("final junction has even parity %d" % junction)
    elements = [Element(dec.owner[p], m[p]) for p in range(len(d.pieces))]
    return Assignment(elements)


class Violation(NamedTuple):
    rule: int
    location: str
    message: str


def validate_assignment(dec: Decorated, a: Assignment) -> List[Violation]:
    """All violated admissibility rules; empty iff the assignment is admissible."""
    d = dec.diagram
    out: List[Violation] = []
    if len(a) != len(d.pieces):
        return [Violation(1, "diagram", "%d elements for %d segments" % (len(a), len(d.pieces)))]
    for p, e in enumerate(a.elements):
        if e.bridge != dec.owner[p]:
            out.append(Violation(1, "segment %d" % p,
                                 "element of bridge %d on bridge %d" % (e.bridge, dec.owner[p])))
    crossing_ends = {c.over_in for c in d.crossings} | {c.under_in for c in d.crossings}
    for p in range(len(d.pieces) - 1):
        if p not in crossing_ends and a[p] != a[p + 1]:
            out.append(Violation(1, "segment %d" % p,
                                 "element changes at a polyline corner: %r -> %r"
                                 % (a[p], a[p + 1])))
    for c in d.crossings:
        o_in, o_out = a[c.over_in], a[c.over_out]
        left, right = (o_in, o_out) if c.chirality < 0 else (o_out, o_in)
        if left.m != right.m + 1:
            out.append(Violation(2, "crossing %d" % c.index,
                                 "left over-segment offset %d, right %d" % (left.m, right.m)))
        u_in, u_out = a[c.under_in], a[c.under_out]
        if (u_in.m + u_out.m) % 2 != 1:
            out.append(Violation(3, "crossing %d" % c.index,
                                 "offsets %d + %d are not odd" % (u_in.m, u_out.m)))
    for p in (0, len(d.pieces) - 1):
        if a[p].m != 0:
            out.append(Violation(4, "segment %d" % p, "infinite segment has m=%d" % a[p].m))
    return out


# --------------------------------------------------------- auxiliary forms

def element_form(e: Element, eps=EPS) -> LinearForm:
    return LinearForm.of_element(e, eps)


def auxiliary_forms(dec: Decorated, a: Assignment, eps=EPS) -> List[LinearForm]:
    """One form per vertical line: (under_in + under_out - over_in - over_out)(-1)^k."""
    d = dec.diagram
    forms = []
    for line in dec.lines:
        c = d.crossings[line.associated_crossing]
        f = (element_form(a[c.under_in], eps) + element_form(a[c.under_out], eps)
             - element_form(a[c.over_in], eps) - element_form(a[c.over_out], eps))
        forms.append(f.scale(-1 if line.k % 2 else 1))
    return forms


def crossing_weight(c: Crossing, a: Assignment, eps=EPS) -> QuadraticForm:
    """(o_in - u_out) * o_out for chirality -1, (o_in - u_out) * o_in for +1."""
    o_in = element_form(a[c.over_in], eps)
    o_out = element_form(a[c.over_out], eps)
    u_out = element_form(a[c.under_out], eps)
    return (o_in - u_out) * (o_out if c.chirality < 0 else o_in)


def intersection_weight(k: int, alpha: Element, aux: LinearForm, eps=EPS) -> QuadraticForm:
    """(-1)^k (alpha - eps) * aux for the k-th (1-based, bottom-up) intersection."""
    return (element_form(alpha, eps) - LinearForm({}, eps)).scale(-1 if k % 2 else 1) * aux


def action_functional(dec: Decorated, a: Assignment, forms: Optional[List[LinearForm]] = None,
                      eps=EPS) -> QuadraticForm:
    """Sum of all crossing weights and all intersection weights."""
    if forms is None:
        forms = auxiliary_forms(dec, a, eps)
    terms = [crossing_weight(c, a, eps) for c in dec.diagram.crossings]
    for line, aux in zip(dec.lines, forms):
        for k, (piece, _) in enumerate(line.hits, start=1):
            terms.append(intersection_weight(k, a[piece], aux, eps))
    return QuadraticForm.sum(terms)


def debug_dump(dec: Decorated, a: Assignment, forms: Sequence[LinearForm], phi: QuadraticForm,
               names: Optional[Sequence[str]] = None) -> str:
    """Text dump of the assignment, auxiliary forms and action functional."""
    lines = ["bridges: %d" % len(dec.bridges)]
    for p, e in enumerate(a.elements):
        lines.append("segment %d: %s%+d*eps" % (p, _name(names, e.bridge), e.m))
    for i, f in enumerate(forms):
        lines.append("aux %d (crossing %d): %s" % (
            i, dec.lines[i].associated_crossing, format_form(f.coeffs, {}, f.constant, names)))
    lines.append("phi: %s" % format_form(phi.lin, phi.quad, phi.constant, names))
    return "\n".join(lines) + "\n"
