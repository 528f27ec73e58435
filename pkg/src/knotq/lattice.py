"""Integer linear algebra for the constraint lattice.

The auxiliary forms give an integer matrix ``M`` (one row per vertical line,
one column per bridge).  The points of ``R^B`` where every form is an integer,
taken modulo ``Z^B``, form the group ``F_D = T^(free) + finite torsion``.  A
Smith normal form ``U M V = S`` presents it explicitly: the torsion generators
are the columns of ``V`` divided by the invariant factors.
"""
import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

DEFAULT_GROUP_CAP = 10 ** 6

IntMatrix = List[List[int]]


class UnexpectedFreeRank(ValueError):
    pass


class GroupTooLarge(ValueError):
    pass


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(a))]


def matvec(a, x):
    return [sum(r[k] * x[k] for k in range(len(x))) for r in a]


def det_int(a: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass
class SNFResult:
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> List[int]:
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]

    @property
    def invariant_factors(self) -> List[int]:
        return [d for d in self.diagonal if d != 0]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int = None) -> SNFResult:
    """Smith normal form with unimodular certificates, ``U @ M @ V == S``.

    Pivots on the entry of least absolute value; the result is checked by
    multiplication before it is returned.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if A else (ncols or 0)
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    res = SNFResult(U, A, V)
    if m and n:
        assert matmul(matmul(U, [list(map(int, r)) for r in M]), V) == A, "SNF certificate failed"
    return res


@dataclass
class SolutionGroup:
    n_bridges: int
    torsion_factors: List[int]
    torsion_gen_lifts: List[List[Fraction]]
    free_basis: List[List[int]]
    cert: SNFResult

    @property
    def order(self) -> int:
        out = 1
        for d in self.torsion_factors:
            out *= d
        return out

    @property
    def free_rank(self) -> int:
        return len(self.free_basis)

    def is_cyclic(self) -> bool:
        return len(self.torsion_factors) == 1


def constraint_matrix(forms, n_bridges: int) -> IntMatrix:
    return [[f.coeffs.get(b, 0) for b in range(n_bridges)] for f in forms]


def solve_constraints(M: Sequence[Sequence[int]], n_bridges: int,
                      expect_knot: bool = True) -> SolutionGroup:
    """Torsion and free parts of ``{x : M x integral} / Z^B``."""
    snf = smith_normal_form(M, ncols=n_bridges)
    diag = snf.diagonal
    r = snf.rank
    V = snf.V
    lifts, factors = [], []
    for i in range(r):
        d = diag[i]
        if d > 1:
            factors.append(d)
            lifts.append([Fraction(V[k][i], d) for k in range(n_bridges)])
    free = [[V[k][j] for k in range(n_bridges)] for j in range(r, n_bridges)]
    sg = SolutionGroup(n_bridges, factors, lifts, free, snf)
    if expect_knot:
        if len(free) != 1:
            raise UnexpectedFreeRank("free rank %d, expected 1" % len(free))
        if any(matvec(M, [1] * n_bridges)) or len({abs(v) for v in free[0]}) != 1:
            raise UnexpectedFreeRank("free direction %r is not the diagonal" % (free[0],))
        if sg.order % 2 == 0:
            raise AssertionError("even torsion order %d: construction bug" % sg.order)
    return sg


def group_cap() -> int:
    env = os.environ.get("KNOTQ_GROUP_CAP")
    return int(env) if env else DEFAULT_GROUP_CAP


def torsion_elements(sg: SolutionGroup, cap: int = None,
                     lifts: bool = True) -> Iterator[Tuple[Tuple[int, ...], List[Fraction]]]:
    """All torsion elements as ``(coords, lift)`` with lift = sum c_i g_i, c_i in [0, d_i).

    With ``lifts=False`` the lift is None (for callers that build their own).
    """
    cap = group_cap() if cap is None else cap
    if sg.order > cap:
        raise GroupTooLarge("torsion group of order %d exceeds cap %d" % (sg.order, cap))
    for coords in itertools.product(*[range(d) for d in sg.torsion_factors]):
        yield coords, (lift_of(sg, coords) if lifts else None)


def lift_of(sg: SolutionGroup, coords: Sequence[int]) -> List[Fraction]:
    x = [Fraction(0)] * sg.n_bridges
    for c, g in zip(coords, sg.torsion_gen_lifts):
        if c:
            x = [a + c * b for a, b in zip(x, g)]
    return x
