from fractions import Fraction as F
from itertools import groupby

import pytest
import sympy

from knotq.action import (EPS, AssignmentError, Element, LinearForm, QuadraticForm,
                          action_functional, admissible_assignment, auxiliary_forms,
                          crossing_weight, format_form, intersection_weight, validate_assignment)
from knotq.diagram import BraidWord, braid_to_decorated

s, r, q, p = sympy.symbols("s r q p")
SYMS = [s, r, q, p]


def to_sympy(form):
    if isinstance(form, LinearForm):
        return sum(sympy.Rational(c) * SYMS[i] for i, c in form.coeffs.items()) + \
            sympy.Rational(form.constant)
    expr = sympy.Rational(form.constant)
    for (i, j), c in form.quad.items():
        expr += sympy.Rational(c) * SYMS[i] * SYMS[j]
    for i, c in form.lin.items():
        expr += sympy.Rational(c) * SYMS[i]
    return sympy.expand(expr)


def label(e):
    return "srqp"[e.bridge] + ("" if e.m == 0 else "%+d" % e.m)


def test_trefoil_labels_follow_the_figure(trefoil_decorated):
    a = admissible_assignment(trefoil_decorated)
    runs = [k for k, _ in groupby(label(e) for e in a.elements)]
    assert runs == ["s", "s-1", "r", "r-1", "q", "q-1", "p"]
    assert validate_assignment(trefoil_decorated, a) == []


def test_trefoil_aux_forms(trefoil_decorated):
    a = admissible_assignment(trefoil_decorated)
    got = {sympy.srepr(to_sympy(f)) for f in auxiliary_forms(trefoil_decorated, a)}
    want = {sympy.srepr(sympy.expand(-(q + p - 2 * r))),
            sympy.srepr(sympy.expand(-(s + r - 2 * q))),
            sympy.srepr(sympy.expand(-(r + q - 2 * s)))}
    assert got == want


def test_trefoil_action_functional(trefoil_decorated):
    dec = trefoil_decorated
    a = admissible_assignment(dec)
    forms = auxiliary_forms(dec, a)
    phi = to_sympy(action_functional(dec, a, forms))
    # eliminate p through the relation attached to the crossing it ends at
    rel = next(to_sympy(f) for f in forms if f.coeffs.get(3))
    p_sol = sympy.solve(rel, p)[0]
    reduced = sympy.expand(phi.subs(p, p_sol))
    assert reduced == sympy.expand(q * r + s * q + r * s - r ** 2 - q ** 2 - s ** 2)


def test_crossing_weight_for_a_positive_crossing(trefoil, trefoil_decorated):
    a = admissible_assignment(trefoil_decorated)
    c = trefoil.crossings[2]
    o_in, o_out, u_out = (to_sympy(LinearForm.of_element(a[i])) for i in
                          (c.over_in, c.over_out, c.under_out))
    assert to_sympy(crossing_weight(c, a)) == sympy.expand((o_in - u_out) * o_out)


def test_intersection_weight_sign_alternates():
    aux = LinearForm({0: 1})
    e = Element(1, 0)
    w1, w2 = intersection_weight(1, e, aux), intersection_weight(2, e, aux)
    assert w1 == w2.scale(-1)
    assert w2 == (LinearForm({1: 1}) - LinearForm({}, EPS)) * aux


def test_forms_have_integer_constant_and_zero_coefficient_sum(trefoil_decorated):
    a = admissible_assignment(trefoil_decorated)
    for f in auxiliary_forms(trefoil_decorated, a):
        assert f.coefficient_sum() == 0
        assert F(f.constant).denominator == 1


def test_entry_offsets_must_fix_parity():
    dec = braid_to_decorated(BraidWord(3, [1, -2, 1, -2]))
    with pytest.raises(AssignmentError):
        admissible_assignment(dec, entry=lambda bridge, prev: prev)
    a = admissible_assignment(dec, entry=lambda bridge, prev: prev + 3)
    assert validate_assignment(dec, a) == []


def test_validation_reports_a_broken_assignment(trefoil_decorated):
    a = admissible_assignment(trefoil_decorated)
    a.elements[7] = a.elements[7].shifted(2)
    assert validate_assignment(trefoil_decorated, a)


class TestForms:
    def test_product_expands(self):
        x = LinearForm({0: 1}, 1)
        y = LinearForm({1: 2})
        assert (x * y).evaluate([F(3), F(5)]) == (3 + 1) * 10

    def test_zero_and_negation(self):
        f = QuadraticForm({(0, 1): 2}, {0: F(1, 2)}, 3)
        assert (f - f).is_zero()
        assert (-f).evaluate([1, 1]) == -f.evaluate([1, 1])

    def test_format_is_canonical(self):
        f = QuadraticForm({(1, 1): -1, (0, 1): 1}, {2: F(1, 2)})
        assert format_form(f.lin, f.quad, f.constant, "srq") == "s*r - r^2 + 1/2*q"
