"""Dense linear algebra over exact rationals.

Matrices are plain lists of lists of ``fractions.Fraction``.  Everything here
is exact: no pivot thresholds, no tolerances.  Sizes stay small (symmetric
matrices of the degree of a polynomial, linear systems with a few hundred
unknowns), so simple Gaussian elimination and the Faddeev-LeVerrier trace
recursion are entirely adequate.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence


Matrix = list[list[Fraction]]


def frac_matrix(rows: Sequence[Sequence]) -> Matrix:
    """Coerce a nested sequence of ints/Fractions to a Fraction matrix."""
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += c * bt[j]
    return out


def mat_vec(a: Matrix, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((row[j] * v[j] for j in range(len(v)) if v[j]), Fraction(0)) for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def trace(a: Matrix) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def is_symmetric(a: Matrix) -> bool:
    n = len(a)
    return all(len(row) == n for row in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n)
    )


def charpoly(a: Matrix) -> list[Fraction]:
    """Coefficients c[0..n] of det(tI - A) = sum c[k] t^k, c[n] = 1.

    Faddeev-LeVerrier trace recursion; only divisions by integers occur, so
    the computation is exact over the rationals.
    """
    n = len(a)
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    m = zeros(n, n)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        m = mat_mul(a, m)
        ck = c[n - k + 1]
        for i in range(n):
            m[i][i] += ck
        am = mat_mul(a, m)
        c[n - k] = -trace(am) / k
    return c


def _sign_variations(coeffs: Sequence[Fraction]) -> int:
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def rank_and_signature(s: Matrix) -> tuple[int, int]:
    """Exact (rank, signature) of a symmetric rational matrix.

    The eigenvalues are the roots of the characteristic polynomial; since
    they are all real, Descartes' sign rule counts the positive ones exactly
    (with multiplicity), and the multiplicity of the zero root is the index
    of the lowest nonzero coefficient.
    """
    if not is_symmetric(s):
        raise ValueError("matrix is not symmetric")
    n = len(s)
    if n == 0:
        return (0, 0)
    c = charpoly(s)
    null_mult = next(k for k in range(n + 1) if c[k] != 0)
    rank = n - null_mult
    pos = _sign_variations(list(reversed(c)))
    neg = rank - pos
    return (rank, pos - neg)


def is_psd(s: Matrix) -> bool:
    """Exact positive-semidefiniteness of a symmetric rational matrix.

    All eigenvalues are >= 0 iff every signed coefficient
    (-1)^(n-k) c_k of det(tI - S) is >= 0 (these are the elementary
    symmetric functions of the eigenvalues).
    """
    if not is_symmetric(s):
        raise ValueError("matrix is not symmetric")
    n = len(s)
    c = charpoly(s)
    return all((-1) ** (n - k) * c[k] >= 0 for k in range(n + 1))


def det(a: Matrix) -> Fraction:
    """Determinant via fraction-free-ish Gaussian elimination (exact)."""
    n = len(a)
    m = [row[:] for row in a]
    sign = 1
    d = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        p = m[col][col]
        d *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                for j in range(col, n):
                    m[r][j] -= f * m[col][j]
    return sign * d


class LinearSolveResult:
    """Outcome of solving A x = b over the rationals.

    ``solution`` is a particular solution (None when inconsistent),
    ``nullspace`` a basis of ker(A), ``rank`` the rank of A, and
    ``rank_deficit`` = rank([A|b]) - rank(A) (1 exactly when inconsistent).
    """

    def __init__(self, solution, nullspace, rank, rank_deficit):
        self.solution = solution
        self.nullspace = nullspace
        self.rank = rank
        self.rank_deficit = rank_deficit

    @property
    def consistent(self) -> bool:
        return self.solution is not None


def solve_linear(a: Matrix, b: Sequence[Fraction]) -> LinearSolveResult:
    """Gauss-Jordan over the rationals with full rank bookkeeping."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(rows)]
    pivots: list[int] = []
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][col]
        aug[r] = [x / p for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    rank = len(pivots)
    inconsistent = any(
        all(aug[i][j] == 0 for j in range(cols)) and aug[i][cols] != 0
        for i in range(rank, rows)
    )
    if inconsistent:
        return LinearSolveResult(None, [], rank, 1)
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    sol = [Fraction(0)] * cols
    for i, col in enumerate(pivots):
        sol[col] = aug[i][cols]
    nullspace = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, col in enumerate(pivots):
            v[col] = -aug[i][f]
        nullspace.append(v)
    return LinearSolveResult(sol, nullspace, rank, 0)


def min_norm_solution(result: LinearSolveResult) -> list[Fraction]:
    """Least sum-of-squares solution within the affine solution set.

    Minimizes ||x0 + N c||^2 over c by the exact normal equations
    (N^T N) c = -N^T x0; N^T N is positive definite because the nullspace
    basis has full column rank.
    """
    x0 = result.solution
    if x0 is None:
        raise ValueError("system is inconsistent")
    ns = result.nullspace
    if not ns:
        return list(x0)
    k = len(ns)
    gram = [[sum((u[t] * v[t] for t in range(len(x0))), Fraction(0)) for v in ns] for u in ns]
    rhs = [-sum((u[t] * x0[t] for t in range(len(x0))), Fraction(0)) for u in ns]
    coeffs = solve_linear(gram, rhs)
    assert coeffs.consistent and coeffs.rank == k
    c = coeffs.solution
    out = list(x0)
    for j in range(k):
        if c[j]:
            for t in range(len(out)):
                out[t] += c[j] * ns[j][t]
    return out


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    """Exact square root of a rational, or None when irrational/negative."""
    if q < 0:
        return None
    if q == 0:
        return Fraction(0)
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None
