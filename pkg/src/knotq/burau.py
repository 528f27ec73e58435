"""Reduced Burau representation and the knot determinant |Alexander(-1)|.

This is an oracle independent of the diagram pipeline: it only sees the braid
word.  ``det(I - burau(b)) = Alexander(t) * (1 + t + ... + t^(n-1))`` up to a
unit, so the division is done symbolically before evaluating at ``t = -1``
(the divisor vanishes there for even strand counts).
"""
from fractions import Fraction
from typing import Dict, List

from .diagram import BraidWord, NotAKnot


class LaurentPoly:
    """Integer Laurent polynomial in ``t``, stored as {exponent: coefficient}."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        if isinstance(coeffs, int):
            coeffs = {0: coeffs}
        self.c: Dict[int, int] = {e: v for e, v in (coeffs or {}).items() if v}

    @classmethod
    def t(cls, power: int = 1, coeff: int = 1) -> "LaurentPoly":
        return cls({power: coeff})

    def __add__(self, other):
        other = _lp(other)
        out = dict(self.c)
        for e, v in other.c.items():
            out[e] = out.get(e, 0) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self.c.items()})

    def __sub__(self, other):
        return self + (-_lp(other))

    def __rsub__(self, other):
        return _lp(other) - self

    def __mul__(self, other):
        other = _lp(other)
        out: Dict[int, int] = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + v1 * v2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, (LaurentPoly, int)) and self.c == _lp(other).c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def is_zero(self) -> bool:
        return not self.c

    @property
    def low(self) -> int:
        return min(self.c) if self.c else 0

    @property
    def high(self) -> int:
        return max(self.c) if self.c else 0

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: v for e, v in self.c.items()})

    def normalized(self) -> "LaurentPoly":
        """Shift to lowest exponent 0 and make the constant term positive."""
        if not self.c:
            return self
        p = self.shift(-self.low)
        return -p if p.c[0] < 0 else p

    def divmod_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; raises ArithmeticError when ``other`` does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = LaurentPoly(self.c)
        q: Dict[int, int] = {}
        lead_e = other.high
        lead = other.c[lead_e]
        while not rem.is_zero() and rem.high - rem.low >= other.high - other.low:
            e = rem.high
            v, r = divmod(rem.c[e], lead)
            if r:
                raise ArithmeticError("inexact division")
            q[e - lead_e] = q.get(e - lead_e, 0) + v
            rem = rem - LaurentPoly({e - lead_e: v}) * other
        if not rem.is_zero():
            raise ArithmeticError("inexact division, remainder %r" % (rem,))
        return LaurentPoly(q)

    def __call__(self, value):
        value = Fraction(value)
        return sum((v * value ** e for e, v in self.c.items()), Fraction(0))

    def coefficients(self) -> List[int]:
        """Dense coefficient list from the lowest exponent up."""
        if not self.c:
            return [0]
        return [self.c.get(e, 0) for e in range(self.low, self.high + 1)]

    def __repr__(self):
        if not self.c:
            return "0"
        return " + ".join("%d*t^%d" % (v, e) for e, v in sorted(self.c.items()))


def _lp(x) -> LaurentPoly:
    return x if isinstance(x, LaurentPoly) else LaurentPoly(int(x))


ONE, ZERO = LaurentPoly(1), LaurentPoly()
T, T_INV = LaurentPoly.t(1), LaurentPoly.t(-1)


def _generator(n: int, letter: int) -> List[List[LaurentPoly]]:
    """Reduced Burau matrix (size n-1) of sigma_|letter|^sign(letter)."""
    size = n - 1
    m = [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]
    i = abs(letter) - 1  # 0-based generator index
    if letter > 0:
        m[i][i] = -T
        if i > 0:
            m[i - 1][i] = T
        if i < size - 1:
            m[i + 1][i] = ONE
    else:
        m[i][i] = -T_INV
        if i > 0:
            m[i - 1][i] = ONE
        if i < size - 1:
            m[i + 1][i] = T_INV
    return m


def _matmul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n) if not a[i][k].is_zero()
                  and not b[k][j].is_zero()), ZERO) for j in range(n)] for i in range(n)]


def burau_matrix(b: BraidWord) -> List[List[LaurentPoly]]:
    n = b.strands
    size = n - 1
    m = [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]
    for x in b.letters:
        m = _matmul(m, _generator(n, x))
    return m


def poly_det(a: List[List[LaurentPoly]]) -> LaurentPoly:
    """Bareiss determinant over Z[t, 1/t] (entries first shifted to polynomials)."""
    n = len(a)
    if n == 0:
        return ONE
    shift = -min(min((e.low for e in row if not e.is_zero()), default=0) for row in a)
    shift = max(shift, 0)
    m = [[e.shift(shift) for e in row] for row in a]
    sign, prev = 1, ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ZERO
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).divmod_exact(prev)
        prev = m[k][k]
    return (m[n - 1][n - 1] * sign).shift(-shift * n)


def alexander_polynomial(b: BraidWord) -> LaurentPoly:
    """Alexander polynomial of the closure, normalized to a polynomial with Delta(0) > 0."""
    if not b.is_knot():
        raise NotAKnot("closure of %s has more than one component" % (b,))
    n = b.strands
    rho = burau_matrix(b)
    size = n - 1
    diff = [[(ONE if i == j else ZERO) - rho[i][j] for j in range(size)] for i in range(size)]
    num = poly_det(diff)
    divisor = LaurentPoly({e: 1 for e in range(n)})
    return num.divmod_exact(divisor).normalized()


def burau_determinant(b: BraidWord) -> int:
    """|Alexander(-1)| of the braid closure."""
    value = alexander_polynomial(b)(-1)
    assert value.denominator == 1
    return abs(value.numerator)
