"""From a decorated diagram to the orbit-reduced invariant.

The action functional is evaluated mod 1 on lifts of the torsion elements of
the solution group; the resulting table ``q`` is fitted to ``n*alpha*x^2`` in
the cyclic case and reduced by the unit group to ``minv``.
"""
import cmath
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .action import EPS, QuadraticForm, action_functional, admissible_assignment, auxiliary_forms
from .diagram import BraidWord, Decorated, LongDiagram, braid_to_decorated, decorate
from .lattice import (SolutionGroup, constraint_matrix, lift_of, matvec,
                      solve_constraints, torsion_elements)

GAUSS_TOL = 1e-9

CHIRAL = "chiral-conjectural"
UNDETECTED = "undetected"
TRIVIAL = "trivial"

Coords = Tuple[int, ...]
QTable = Dict[Coords, Fraction]


class QuadraticModelViolation(ArithmeticError):
    """The table is not of the form n*alpha*x^2 on a cyclic group."""


class PreconditionError(ValueError):
    pass


def mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


def balanced(a: int, n: int) -> int:
    """Representative of a mod n in [-(n-1)/2, (n-1)/2] (n odd)."""
    r = a % n
    return r - n if r > n // 2 else r


def _is_integral(v: Sequence[Fraction]) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def evaluate_mod1(phi: QuadraticForm, lift: Sequence[Fraction], M=None) -> Fraction:
    """Value of phi at ``lift`` reduced to [0, 1); with ``M`` the lift is checked first."""
    if M is not None and not _is_integral(matvec(M, lift)):
        raise PreconditionError("lift %r violates the integrality constraints" % (list(lift),))
    return mod1(phi.evaluate(lift))


# ------------------------------------------------------------- group helpers

def _add(a: Coords, b: Coords, factors) -> Coords:
    return tuple((x + y) % d for x, y, d in zip(a, b, factors))


def _neg(a: Coords, factors) -> Coords:
    return tuple((-x) % d for x, d in zip(a, factors))


def _mul(k: int, a: Coords, factors) -> Coords:
    return tuple((k * x) % d for x, d in zip(a, factors))


def qtable(phi: QuadraticForm, sg: SolutionGroup, M=None) -> QTable:
    # integrality of the generator lifts implies it for every integer combination
    if M is not None:
        for g in sg.torsion_gen_lifts:
            if not _is_integral(matvec(M, g)):
                raise PreconditionError("generator lift %r violates the constraints" % (g,))
    N = max(sg.torsion_factors, default=1)
    gens = []
    for g in sg.torsion_gen_lifts:
        v = [x * N for x in g]
        assert all(x.denominator == 1 for x in v)
        gens.append([int(x) for x in v])
    value = _integer_evaluator(phi, N)
    table = {}
    for coords, _ in torsion_elements(sg, lifts=False):
        v = [0] * sg.n_bridges
        for c, g in zip(coords, gens):
            if c:
                v = [a + c * b for a, b in zip(v, g)]
        table[coords] = value(v)
    return table


def _integer_evaluator(phi: QuadraticForm, N: int):
    """phi(v / N) mod 1 for integer vectors v, using integer arithmetic only."""
    coeffs = list(phi.quad.values()) + list(phi.lin.values()) + [phi.constant]
    D = 1
    for c in coeffs:
        D = D * c.denominator // math.gcd(D, c.denominator)
    quad = [(i, j, int(c * D)) for (i, j), c in phi.quad.items()]
    lin = [(i, int(c * D) * N) for i, c in phi.lin.items()]
    const = int(phi.constant * D) * N * N
    den = D * N * N

    def value(v):
        num = const
        for i, j, c in quad:
            num += c * v[i] * v[j]
        for i, c in lin:
            num += c * v[i]
        return Fraction(num % den, den)
    return value


def bilinear(qt: QTable, factors, x: Coords, y: Coords) -> Fraction:
    return mod1(qt[_add(x, y, factors)] - qt[x] - qt[y])


def quadraticity_violations(qt: QTable, factors, limit: int = 10 ** 3) -> List[str]:
    """q(0) = 0, parallelogram law, symmetry and bi-additivity of b (when |T| <= limit)."""
    out = []
    zero = tuple(0 for _ in factors)
    if qt[zero] != 0:
        out.append("q(0) = %s" % qt[zero])
    keys = list(qt)
    if len(keys) > limit:
        keys = keys[:limit]
    for x in keys:
        for y in keys:
            lhs = mod1(qt[_add(x, y, factors)] + qt[_add(x, _neg(y, factors), factors)])
            rhs = mod1(2 * qt[x] + 2 * qt[y])
            if lhs != rhs:
                out.append("parallelogram law fails at %r, %r" % (x, y))
                return out
            if bilinear(qt, factors, x, y) != bilinear(qt, factors, y, x):
                out.append("b not symmetric at %r, %r" % (x, y))
                return out
    if len(qt) <= limit:
        for x in keys:
            for y in keys:
                for z in keys[:8]:
                    lhs = bilinear(qt, factors, _add(x, y, factors), z)
                    rhs = mod1(bilinear(qt, factors, x, z) + bilinear(qt, factors, y, z))
                    if lhs != rhs:
                        out.append("b not additive at %r, %r, %r" % (x, y, z))
                        return out
    return out


# ------------------------------------------------------- well-definedness

def well_definedness_check(phi: QuadraticForm, sg: SolutionGroup, M, trials: int = 20,
                           seed: int = 0) -> Optional[dict]:
    """Compare phi on canonical lifts against randomly shifted lifts.

    Shifts add integer vectors and rational multiples of the free directions.
    Returns None when all values agree in Q/Z, else a counterexample record.
    """
    rng = random.Random(seed)
    for coords, lift in torsion_elements(sg):
        base = evaluate_mod1(phi, lift, M)
        for _ in range(trials):
            shift = [Fraction(rng.randint(-3, 3)) for _ in range(sg.n_bridges)]
            for direction in sg.free_basis:
                t = Fraction(rng.randint(-20, 20), rng.randint(1, 12))
                shift = [s + t * v for s, v in zip(shift, direction)]
            other = [a + b for a, b in zip(lift, shift)]
            value = evaluate_mod1(phi, other, M)
            if value != base:
                return {"coords": coords, "lift": lift, "shifted": other,
                        "value": base, "shifted_value": value}
    return None


# ------------------------------------------------------------ cyclic model

def fit_cyclic_alpha(qt: QTable, n: int) -> int:
    """Balanced alpha with q(c*g) = c^2 * alpha / n mod 1 for the generator g."""
    if n == 1:
        return 0
    if n % 2 == 0:
        raise QuadraticModelViolation("even order %d" % n)
    qg = qt[(1,)]
    a = qg * n
    if a.denominator != 1:
        raise QuadraticModelViolation("q(g) = %s has denominator not dividing %d" % (qg, n))
    alpha = balanced(a.numerator, n)
    for c in range(n):
        if qt[(c,)] != mod1(Fraction(c * c * alpha, n)):
            raise QuadraticModelViolation("q(%d g) = %s, expected %d^2 * %d / %d"
                                          % (c, qt[(c,)], c, alpha, n))
    return alpha


def aut_orbit_minv(n: int, alpha: int) -> List[int]:
    """Smallest-|m| balanced residues with alpha = m k^2 (mod n) for a unit k, sorted."""
    if n == 1:
        return [0]
    units = [k for k in range(1, n) if math.gcd(k, n) == 1]
    orbit = set()
    for k in units:
        k2 = k * k % n
        for m in range(-(n - 1) // 2, (n - 1) // 2 + 1):
            if (m * k2 - alpha) % n == 0:
                orbit.add(m)
    best = min(abs(m) for m in orbit)
    return sorted(m for m in orbit if abs(m) == best)


# ------------------------------------------------------------- fingerprint

Multiset = Tuple[Tuple[Fraction, int], ...]


def _multiset(counts) -> Multiset:
    return tuple(sorted((v, c) for v, c in counts.items() if c))


@dataclass(frozen=True)
class Fingerprint:
    """Aut-invariant comparison data; multisets are sorted (value, count) pairs."""
    torsion: Tuple[int, ...]
    q_values: Multiset
    b_values: Multiset

    def negated(self) -> "Fingerprint":
        def neg(ms):
            out: Counter = Counter()
            for v, c in ms:
                out[mod1(-v)] += c
            return _multiset(out)
        return Fingerprint(self.torsion, neg(self.q_values), neg(self.b_values))

    def q_multiset(self) -> Dict[Fraction, int]:
        return dict(self.q_values)

    def to_json(self) -> dict:
        return {"torsion": list(self.torsion),
                "q": {_fmt_q(v): c for v, c in self.q_values},
                "b": {_fmt_q(v): c for v, c in self.b_values}}


def _fmt_q(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else "%d/%d" % (v.numerator, v.denominator)


def bilinear_multiset(qt: QTable, factors: Sequence[int]) -> Counter:
    """Multiset of b(x, y) over all pairs, in O(|T| * rank) lookups.

    For fixed x, y -> b(x, y) is a character of T, so its values are spread
    evenly over the cyclic subgroup of Q/Z generated by b(x, e_i) for the
    torsion generators e_i.
    """
    order = len(qt)
    units = [tuple(int(i == j) for j in range(len(factors))) for i in range(len(factors))]
    out: Counter = Counter()
    for x in qt:
        m = 1
        for e in units:
            den = bilinear(qt, factors, x, e).denominator
            m = m * den // math.gcd(m, den)
        for j in range(m):
            out[Fraction(j, m)] += order // m
    return out


def bilinear_multiset_bruteforce(qt: QTable, factors: Sequence[int]) -> Counter:
    return Counter(bilinear(qt, factors, x, y) for x in qt for y in qt)


def orbit_fingerprint(qt: QTable, factors: Sequence[int]) -> Fingerprint:
    return Fingerprint(tuple(factors), _multiset(Counter(qt.values())),
                       _multiset(bilinear_multiset(qt, factors)))


# --------------------------------------------------------------- gauss sum

@dataclass(frozen=True)
class GaussSum:
    value: complex
    mag2: float
    phase_quarter_pi: float
    order: int

    @property
    def normalized(self) -> complex:
        return self.value / self.order

    @property
    def phase_index(self) -> int:
        """phase / (pi/4) rounded into (-4, 4]."""
        k = round(self.phase_quarter_pi) % 8
        return k - 8 if k > 4 else k

    def is_consistent(self, tol: float = GAUSS_TOL) -> bool:
        return (abs(self.mag2 - self.order) <= tol * max(1, self.order)
                and abs(self.phase_quarter_pi - round(self.phase_quarter_pi)) <= tol)


def gauss_sum(qt: QTable) -> GaussSum:
    s = sum(cmath.exp(2j * math.pi * float(v)) for v in qt.values())
    return GaussSum(s, abs(s) ** 2, cmath.phase(s) * 4 / math.pi, len(qt))


# ------------------------------------------------------------------ report

@dataclass
class Pipeline:
    """Every intermediate object of one invariant computation."""
    decorated: Decorated
    assignment: object
    forms: list
    phi: QuadraticForm
    matrix: list
    group: SolutionGroup
    qtable: QTable


@dataclass
class InvariantReport:
    torsion: List[int]
    qtable: QTable
    alpha: Optional[int]
    minv: Optional[List[int]]
    fingerprint: Fingerprint
    gauss: GaussSum
    verdict: str
    crossings: int = 0
    extras: dict = field(default_factory=dict)

    def key(self):
        """Presentation-independent comparison key."""
        return (tuple(self.torsion), tuple(self.minv) if self.minv is not None else None,
                self.fingerprint)

    def to_json(self) -> dict:
        return {
            "torsion": list(self.torsion),
            "alpha": self.alpha,
            "minv": self.minv,
            "fingerprint": self.fingerprint.to_json(),
            "gauss": {"mag2": round(self.gauss.mag2, 9),
                      "phase_quarter_pi": round(self.gauss.phase_quarter_pi, 9)},
            "verdict": self.verdict,
        }

    def to_text(self) -> str:
        js = self.to_json()
        fp = js["fingerprint"]
        lines = [
            "torsion: %s" % (js["torsion"] or "trivial"),
            "alpha: %s" % ("undefined" if js["alpha"] is None else js["alpha"]),
            "minv: %s" % ("undefined" if js["minv"] is None else js["minv"]),
            "fingerprint: q=%s b=%s" % (_ms_text(fp["q"]), _ms_text(fp["b"])),
            "gauss: mag2=%s phase_quarter_pi=%s" % (js["gauss"]["mag2"],
                                                    js["gauss"]["phase_quarter_pi"]),
            "verdict: %s" % js["verdict"],
        ]
        return "\n".join(lines) + "\n"


def _ms_text(ms: Dict[str, int]) -> str:
    return "{" + ", ".join("%sx%d" % (k, v) for k, v in ms.items()) + "}"


Source = Union[BraidWord, LongDiagram, Decorated]


def to_decorated(source: Source, layout: str = "left", restart: int = 0) -> Decorated:
    if isinstance(source, Decorated):
        return source
    if isinstance(source, LongDiagram):
        return decorate(source, restart=restart)
    if isinstance(source, BraidWord):
        return braid_to_decorated(source, layout=layout, restart=restart)
    raise TypeError("cannot compute an invariant of %r" % (source,))


def run_pipeline(source: Source, layout: str = "left", restart: int = 0,
                 entry=None, eps=EPS) -> Pipeline:
    dec = to_decorated(source, layout=layout, restart=restart)
    a = admissible_assignment(dec, entry=entry)
    forms = auxiliary_forms(dec, a, eps)
    phi = action_functional(dec, a, forms, eps)
    M = constraint_matrix(forms, len(dec.bridges))
    sg = solve_constraints(M, len(dec.bridges))
    return Pipeline(dec, a, forms, phi, M, sg, qtable(phi, sg, M))


def report_from_pipeline(p: Pipeline) -> InvariantReport:
    sg, qt = p.group, p.qtable
    factors = sg.torsion_factors
    alpha = minv = None
    if not factors:
        alpha, minv = 0, [0]
    elif sg.is_cyclic():
        alpha = fit_cyclic_alpha(qt, factors[0])
        minv = aut_orbit_minv(factors[0], alpha)
    if not factors:
        verdict = TRIVIAL
    elif minv is not None and len(minv) == 1 and minv[0] != 0:
        verdict = CHIRAL
    else:
        verdict = UNDETECTED
    return InvariantReport(list(factors), qt, alpha, minv, orbit_fingerprint(qt, factors),
                           gauss_sum(qt), verdict, crossings=p.decorated.diagram.n_crossings)


def full_report(source: Source, **kwargs) -> InvariantReport:
    """Run the whole pipeline on a braid word or a diagram."""
    return report_from_pipeline(run_pipeline(source, **kwargs))


def reparametrized(qt: QTable, factors: Sequence[int], k: int) -> QTable:
    """Table seen through the automorphism x -> k*x (k a unit of every factor)."""
    return {x: qt[_mul(k, x, factors)] for x in qt}


def mirror_discrepancies(report: InvariantReport, mirrored: InvariantReport) -> List[str]:
    """Conjectured sign flip: minv(mirror) = -minv and the fingerprint is negated.

    An empty list means the pair is consistent with the conjecture.
    """
    out = []
    if report.torsion != mirrored.torsion:
        out.append("torsion %s vs %s" % (report.torsion, mirrored.torsion))
    if report.minv is not None:
        want = sorted(-m for m in report.minv)
        if mirrored.minv != want:
            out.append("minv(mirror) = %s, expected %s" % (mirrored.minv, want))
    if mirrored.fingerprint != report.fingerprint.negated():
        out.append("mirror fingerprint is not the negated fingerprint")
    return out
