"""Acceptance gate: one pass/fail line per criterion.

Under pytest the lines are repeated in the terminal summary; running this file
directly prints them and exits nonzero if a gating criterion fails.
"""
import cmath
import math
import random
import sys
from functools import lru_cache
from itertools import groupby

import pytest
import sympy

from knotq.action import admissible_assignment, auxiliary_forms, action_functional
from knotq.burau import burau_determinant
from knotq.cli import load_corpus, run_corpus
from knotq.diagram import LAYOUTS, BraidWord, decorate, parse_diagram
from knotq.invariant import (fit_cyclic_alpha, full_report, mirror_discrepancies, mod1,
                             quadraticity_violations, report_from_pipeline, run_pipeline,
                             well_definedness_check)
from knotq.moves import fuzz, mirror

SEED = 20261014
N_RANDOM_BRAIDS = 200


@lru_cache(maxsize=None)
def corpus():
    return tuple(load_corpus())


@lru_cache(maxsize=None)
def corpus_pipeline(name, layout="left"):
    entry = next(e for e in corpus() if e.name == name)
    return run_pipeline(entry.source, layout=layout)


@lru_cache(maxsize=None)
def random_knot_braids():
    rng = random.Random(SEED)
    out = []
    while len(out) < N_RANDOM_BRAIDS:
        n = rng.randint(2, 5)
        letters = [rng.randint(1, n - 1) * rng.choice((1, -1)) for _ in range(rng.randint(0, 12))]
        b = BraidWord(n, letters)
        if b.is_knot():
            out.append(b)
    return tuple(out)


# ------------------------------------------------------------ criterion 1

def criterion_trefoil_calibration():
    from conftest import load_trefoil_spec

    dec = decorate(parse_diagram(load_trefoil_spec()))
    a = admissible_assignment(dec)
    names = "srqp"
    runs = [k for k, _ in groupby("%s%+d" % (names[e.bridge], e.m) if e.m else names[e.bridge]
                                  for e in a.elements)]
    s, r, q, p = syms = sympy.symbols("s r q p")

    def lin(f):
        return sum(sympy.Rational(c) * syms[i] for i, c in f.coeffs.items()) + \
            sympy.Rational(f.constant)

    forms = auxiliary_forms(dec, a)
    aux = {sympy.expand(lin(f)) for f in forms}
    want_aux = {sympy.expand(-(q + p - 2 * r)), sympy.expand(-(s + r - 2 * q)),
                sympy.expand(-(r + q - 2 * s))}
    phi_form = action_functional(dec, a, forms)
    phi = sympy.Rational(phi_form.constant)
    for (i, j), c in phi_form.quad.items():
        phi += sympy.Rational(c) * syms[i] * syms[j]
    for i, c in phi_form.lin.items():
        phi += sympy.Rational(c) * syms[i]
    rel = next(lin(f) for f in forms if f.coeffs.get(3))
    reduced = sympy.expand(phi.subs(p, sympy.solve(rel, p)[0]))
    target = sympy.expand(q * r + s * q + r * s - r ** 2 - q ** 2 - s ** 2)
    problems = []
    if runs != ["s", "s-1", "r", "r-1", "q", "q-1", "p"]:
        problems.append("labels %s" % runs)
    if aux != want_aux:
        problems.append("aux forms %s" % aux)
    if reduced != target:
        problems.append("phi reduces to %s" % reduced)
    return not problems, "; ".join(problems) or "labels, aux forms and phi exact"


# ------------------------------------------------------------ criterion 2

def criterion_corpus_regression():
    rows, failed = run_corpus(corpus())
    reps = {r["name"]: r["report"] for r in rows}
    problems = ["%s: %s" % (r["name"], "; ".join(r["problems"])) for r in rows if r["problems"]]

    def same(x, y):
        return reps[x].key() == reps[y].key() and \
            reps[x].gauss.phase_index == reps[y].gauss.phase_index

    if not same("7_4", "K11n13"):
        problems.append("7_4 and K11n13 differ")
    if same("7_4", "9_2") or same("9_2", "K11n13"):
        problems.append("9_2 is not distinguished")
    return not problems, "; ".join(problems) or "%d entries match, 7_4 = K11n13 != 9_2" % len(rows)


# ------------------------------------------------------------ criterion 3

def criterion_oracle_equivalence():
    bad = []
    sources = [e.source for e in corpus()] + list(random_knot_braids())
    for b in sources:
        order = run_pipeline(b).group.order
        det = burau_determinant(b)
        if order != det:
            bad.append("%s: |T| = %d, det = %d" % (b, order, det))
    return not bad, "; ".join(bad[:3]) or "%d braids agree" % len(sources)


# ------------------------------------------------------------ criterion 4

def criterion_well_definedness():
    bad = []
    for i, e in enumerate(corpus()):
        pipe = corpus_pipeline(e.name)
        if pipe.group.free_rank != 1:
            bad.append("%s: free rank %d" % (e.name, pipe.group.free_rank))
        cx = well_definedness_check(pipe.phi, pipe.group, pipe.matrix, trials=20, seed=SEED + i)
        if cx is not None:
            bad.append("%s: %s" % (e.name, cx))
    return not bad, "; ".join(bad) or "20 perturbed lifts per element agree"


# ------------------------------------------------------------ criterion 5

def criterion_presentation_invariance():
    bad = []
    rng = random.Random(SEED)
    for e in corpus():
        ref = full_report(e.source)
        rep = fuzz(e.source, n_moves=30, trials=50, seed=SEED, knot=e.name)
        if not rep.passed:
            bad.append("%s: %s" % (e.name, rep.counterexample))
        for trial in range(6):
            shift = rng.randint(-3, 3)

            def entry(bridge, prev, shift=shift, salt=rng.randint(0, 10 ** 6)):
                return (1 - prev % 2) + 2 * ((shift + bridge * salt) % 5 - 2)

            layout = LAYOUTS[trial % 2]
            pipe = run_pipeline(e.source, layout=layout, restart=trial, entry=entry)
            if report_from_pipeline(pipe).key() != ref.key():
                bad.append("%s: layout %s restart %d shift %d" % (e.name, layout, trial, shift))
    return not bad, "; ".join(bad[:3]) or "50x30 moves, entry offsets and restarts"


# ------------------------------------------------------------ criterion 6

def criterion_quadraticity():
    bad, tables = [], 0
    pipes = [corpus_pipeline(e.name, layout) for e in corpus() for layout in LAYOUTS]
    pipes += [run_pipeline(b) for b in random_knot_braids()]
    for pipe in pipes:
        factors = pipe.group.torsion_factors
        qt = pipe.qtable
        tables += 1
        problems = quadraticity_violations(qt, factors)
        if len(factors) == 1:
            n = factors[0]
            g = qt[(1,)]
            problems += ["q(%d g) != %d^2 q(g)" % (c, c) for c in range(n)
                         if qt[(c,)] != mod1(c * c * g)]
            fit_cyclic_alpha(qt, n)
        if problems:
            bad.append("%s: %s" % (factors, problems[0]))
    return not bad, "; ".join(bad[:3]) or "%d tables exactly quadratic" % tables


# ------------------------------------------------------------ criterion 7

def criterion_gauss_sum():
    bad = []
    phases = {}
    for e in corpus():
        g = report_from_pipeline(corpus_pipeline(e.name)).gauss
        if abs(g.mag2 - g.order) > 1e-9 * max(1, g.order):
            bad.append("%s: |S|^2 = %r" % (e.name, g.mag2))
        if abs(g.phase_quarter_pi - round(g.phase_quarter_pi)) > 1e-9:
            bad.append("%s: phase %r" % (e.name, g.phase_quarter_pi))
        phases[e.name] = (g.phase_index, e.expected.get("signature"))
    tre = report_from_pipeline(corpus_pipeline("3_1")).gauss
    if tre.phase_index != -2 or not cmath.isclose(tre.value, -1j * math.sqrt(3), abs_tol=1e-9):
        bad.append("trefoil S = %r" % tre.value)
    # one global sign, fixed by the trefoil: phase = sign * (-signature) mod 8
    ph, sig = phases["3_1"]
    sign = 1 if ph % 8 == (-sig) % 8 else -1
    for name, (ph, sig) in phases.items():
        if sig is not None and ph % 8 != (sign * -sig) % 8:
            bad.append("%s: phase %d vs signature %d" % (name, ph, sig))
    return not bad, "; ".join(bad) or "|S|^2 = |T|, phases integral and tied to signature " \
                                      "(global sign %+d)" % sign


# ------------------------------------------------------------ criterion 8

def criterion_mirror_conjecture():
    bad = []
    for e in corpus():
        base = full_report(e.source)
        mir = full_report(mirror(e.source))
        bad += ["%s: %s" % (e.name, p) for p in mirror_discrepancies(base, mir)]
    return not bad, "; ".join(bad[:3]) or "minv and fingerprint flip sign on all %d knots" % \
        len(corpus())


CRITERIA = [
    (1, "trefoil calibration", criterion_trefoil_calibration),
    (2, "corpus regression", criterion_corpus_regression),
    (3, "oracle equivalence", criterion_oracle_equivalence),
    (4, "well-definedness", criterion_well_definedness),
    (5, "presentation invariance", criterion_presentation_invariance),
    (6, "quadraticity", criterion_quadraticity),
    (7, "gauss sum", criterion_gauss_sum),
]


@pytest.mark.parametrize("number, title, check", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(acceptance, number, title, check):
    ok, detail = check()
    assert acceptance(number, title, ok, detail), detail


def test_mirror_conjecture(acceptance):
    ok, detail = criterion_mirror_conjecture()
    acceptance(8, "mirror conjecture", ok, detail, gating=False)
    if not ok:
        pytest.xfail("mirror conjecture not observed: " + detail)


def main() -> int:
    failed = False
    for number, title, check in CRITERIA + [(8, "mirror conjecture", criterion_mirror_conjecture)]:
        ok, detail = check()
        tag = " (conjecture, non-gating)" if number == 8 else ""
        print("criterion %d %s%s: %s | %s" % (number, "PASS" if ok else "FAIL", tag, title, detail))
        failed |= (not ok) and number != 8
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
