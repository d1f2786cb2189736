"""Real-zero property tests and example polynomial generators.

A polynomial p with p(0) = 1 is real-zero when p(ta) has only real roots
for every direction a.  Equivalently its Hermite matrix is positive
semidefinite everywhere; sampling that condition at rational points gives
an exact refuter (a failing point disproves the property) but never a
proof, and the reporting here is worded accordingly.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .hermite import hermite_matrix, is_psd
from .polynomials import Polynomial


class RzVerdict(Enum):
    CERTIFIED_PSD_ON_SAMPLES = "certified-psd-on-samples"
    COUNTEREXAMPLE = "counterexample"
    QUADRATIC_EXACT = "quadratic-exact"


@dataclass
class RzReport:
    verdict: RzVerdict
    witness: Optional[tuple] = None
    samples_checked: int = 0

    @property
    def is_positive(self) -> bool:
        return self.verdict != RzVerdict.COUNTEREXAMPLE


def random_rational(rng: random.Random, lo: int = -10, hi: int = 10,
                    max_den: int = 8) -> Fraction:
    """Small random rational in [lo, hi]; kept small for fast exact PSD checks."""
    den = rng.randint(1, max_den)
    num = rng.randint(lo * den, hi * den)
    return Fraction(num, den)


def random_rational_point(rng: random.Random, n: int, lo: int = -10, hi: int = 10,
                          max_den: int = 8) -> tuple[Fraction, ...]:
    return tuple(random_rational(rng, lo, hi, max_den) for _ in range(n))


def rz_check_samples(p: Polynomial, points=100, seed: int = 0,
                     workers: int = 1) -> RzReport:
    """Test PSD-ness of the Hermite matrix at sample points, exactly.

    ``points`` is either an explicit list of rational points or a count of
    random ones.  A failing point refutes the real-zero property; passing
    all samples is evidence only.
    """
    if p.constant_term() != 1:
        raise ValueError("polynomial must satisfy p(0) = 1")
    d = p.total_degree
    if d == float("-inf") or int(d) < 1:
        return RzReport(RzVerdict.CERTIFIED_PSD_ON_SAMPLES, None, 0)
    if isinstance(points, int):
        rng = random.Random(seed)
        pts = [random_rational_point(rng, p.nvars) for _ in range(points)]
    else:
        pts = [tuple(Fraction(x) for x in a) for a in points]
    h = hermite_matrix(p)

    def psd_at(a):
        return is_psd(h.evaluate(a))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flags = list(pool.map(psd_at, pts))
        for i, ok in enumerate(flags):
            if not ok:
                return RzReport(RzVerdict.COUNTEREXAMPLE, pts[i], i + 1)
        return RzReport(RzVerdict.CERTIFIED_PSD_ON_SAMPLES, None, len(pts))
    for i, a in enumerate(pts):
        if not psd_at(a):
            return RzReport(RzVerdict.COUNTEREXAMPLE, a, i + 1)
    return RzReport(RzVerdict.CERTIFIED_PSD_ON_SAMPLES, None, len(pts))


def quadratic_parts(p: Polynomial) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Decompose a quadratic p = x^T A x + b^T x + 1 into (A, b), A symmetric."""
    if p.total_degree != 2:
        raise ValueError("polynomial is not quadratic")
    n = p.nvars
    a = [[Fraction(0)] * n for _ in range(n)]
    b = [Fraction(0)] * n
    for e, c in p.terms.items():
        deg = sum(e)
        idx = [i for i, k in enumerate(e) if k]
        if deg == 1:
            b[idx[0]] = c
        elif deg == 2:
            if len(idx) == 1:
                a[idx[0]][idx[0]] = c
            else:
                i, j = idx
                half = c / 2
                a[i][j] = half
                a[j][i] = half
    return a, b


def rz_quadratic_gram(p: Polynomial) -> list[list[Fraction]]:
    """The matrix b b^T - 4A whose PSD-ness decides the quadratic RZ property."""
    a, b = quadratic_parts(p)
    n = len(b)
    return [[b[i] * b[j] - 4 * a[i][j] for j in range(n)] for i in range(n)]


def rz_check_quadratic(p: Polynomial) -> bool:
    """Exact real-zero decision for quadratics: b b^T - 4A is PSD."""
    if p.constant_term() != 1:
        raise ValueError("polynomial must satisfy p(0) = 1")
    return is_psd(rz_quadratic_gram(p))


def psd_rank1_vectors(b, field: Optional[str] = None) -> list[list]:
    """Vectors v_i with sum v_i v_i^T equal to the PSD matrix b (n of them).

    Exact when b is diagonal with rational square entries (then
    v_i = sqrt(b_ii) e_i); otherwise an eigenfactorization in doubles.
    """
    import numpy as np

    from .exact_linalg import rational_sqrt

    n = len(b)
    diagonal = all(b[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    if field != "double" and diagonal and \
            not any(isinstance(b[i][i], float) for i in range(n)):
        roots = [rational_sqrt(Fraction(b[i][i])) for i in range(n)]
        if all(r is not None for r in roots):
            return [[roots[i] if i == j else Fraction(0) for j in range(n)]
                    for i in range(n)]
    mat = np.array([[float(x) for x in row] for row in b])
    lam, vec = np.linalg.eigh(mat)
    if lam.min() < -1e-9:
        raise ValueError("matrix is not positive semidefinite")
    out = []
    for i in range(n):
        scale = float(np.sqrt(max(lam[i], 0.0)))
        out.append([scale * float(vec[j, i]) for j in range(n)])
    return out


def rz_check(p: Polynomial, samples: int = 100, seed: int = 0,
             exact_quadratic: bool = False, workers: int = 1) -> RzReport:
    """RzReport front-end; exact path for quadratics when requested."""
    if exact_quadratic and p.total_degree == 2:
        if rz_check_quadratic(p):
            return RzReport(RzVerdict.QUADRATIC_EXACT, None, 0)
        witness = _negative_direction(rz_quadratic_gram(p), seed)
        return RzReport(RzVerdict.COUNTEREXAMPLE, witness, 0)
    return rz_check_samples(p, samples, seed, workers)


def _negative_direction(b: list[list[Fraction]], seed: int) -> tuple:
    """Rational point a with a^T B a < 0 for a non-PSD symmetric B.

    Such points fill an open cone, so a widening random search terminates
    quickly; H(p)(a) fails PSD exactly at these points for quadratics.
    """
    n = len(b)
    rng = random.Random(seed)
    for radius in (10, 100, 1000, 10 ** 6):
        for _ in range(20000):
            a = [Fraction(rng.randint(-radius, radius), rng.randint(1, 8))
                 for _ in range(n)]
            val = sum(a[i] * b[i][j] * a[j] for i in range(n) for j in range(n))
            if val < 0:
                return tuple(a)
    raise RuntimeError("failed to locate a negative direction")


def _univariate_squarefree(f: Polynomial) -> bool:
    """gcd(f, f') constant, by the Euclidean algorithm over the rationals."""
    coeffs = {e[0]: c for e, c in f.terms.items()}
    d = max(coeffs) if coeffs else -1
    a = [coeffs.get(i, Fraction(0)) for i in range(d + 1)]
    b = [i * a[i] for i in range(1, d + 1)]

    def degree(v):
        return max((i for i, c in enumerate(v) if c), default=-1)

    def rem(u, v):
        u = list(u)
        dv = degree(v)
        lead = v[dv]
        while degree(u) >= dv >= 0:
            du = degree(u)
            f_ = u[du] / lead
            for i in range(dv + 1):
                u[du - dv + i] -= f_ * v[i]
        return u

    while degree(b) >= 0:
        a, b = b, rem(a, b)
    return degree(a) == 0


def square_free_probabilistic(p: Polynomial, trials: int = 12,
                              seed: int = 0) -> bool:
    """Square-freeness test via random line restrictions.

    Restricts p to random rational lines through the origin and tests the
    degree-d univariate restrictions for repeated roots via gcd(f, f').
    A square factor of p forces repeated roots on every such line; a
    square-free p gives square-free restrictions away from a measure-zero
    set of lines, so either answer can be wrong only on those unlucky draws.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    d = p.total_degree
    if int(d) < 1:
        return True
    rng = random.Random(seed)
    checked = 0
    attempts = 0
    while checked < trials:
        attempts += 1
        if attempts > 50 * trials:
            raise RuntimeError("could not sample full-degree restrictions")
        a = random_rational_point(rng, p.nvars)
        f = p.restrict_to_line(a)
        if f.total_degree != d:
            continue
        if not _univariate_squarefree(f):
            return False
        checked += 1
    return True


_VAMOS_NONBASES = (
    frozenset({1, 4, 5, 6}),
    frozenset({2, 3, 5, 6}),
    frozenset({2, 3, 7, 8}),
    frozenset({1, 4, 7, 8}),
    frozenset({1, 2, 3, 4}),
)


def vamos_basis_polynomial() -> Polynomial:
    """Basis generating polynomial of the Vamos matroid on {1..8}.

    Sum of the 65 squarefree degree-4 monomials whose support is a basis,
    i.e. every 4-subset except the five circuit hyperplanes.
    """
    terms = {}
    for sub in combinations(range(1, 9), 4):
        if frozenset(sub) in _VAMOS_NONBASES:
            continue
        e = [0] * 8
        for i in sub:
            e[i - 1] = 1
        terms[tuple(e)] = Fraction(1)
    return Polynomial(terms, 8)


def vamos_polynomial() -> Polynomial:
    """The shifted, normalized Vamos polynomial: q(x+1)/q(1), so p(0) = 1.

    A degree-4 real-zero polynomial in 8 variables no power of which admits
    a definite determinantal representation.
    """
    q = vamos_basis_polynomial()
    one = Polynomial.one(8)
    shifted = q.substitute_linear([Polynomial.variable(i, 8) + one for i in range(8)])
    return shifted * Fraction(1, shifted.constant_term())


def nodal_plane_cubic() -> Polynomial:
    """(x1-1)^2 (x1+1) - x2^2: a real-zero cubic whose Hermite matrix is a
    sum of squares while the pencil extension problem is unsolvable."""
    x1 = Polynomial.variable(0, 2)
    x2 = Polynomial.variable(1, 2)
    one = Polynomial.one(2)
    return (x1 - one) ** 2 * (x1 + one) - x2 ** 2


def quadratic_from_vectors(b: Sequence[Fraction],
                           vs: Sequence[Sequence[Fraction]]) -> Polynomial:
    """RZ quadratic x^T A x + b^T x + 1 with b b^T - 4A = sum v_i v_i^T.

    Sampling (b, v_i) parametrizes exactly the rational quadratics whose
    positivity certificate is rational, which keeps downstream identity
    tests exact.
    """
    n = len(b)
    a = [[(Fraction(b[i]) * Fraction(b[j])
           - sum(Fraction(v[i]) * Fraction(v[j]) for v in vs)) / 4
          for j in range(n)] for i in range(n)]
    terms: dict = {}
    for i in range(n):
        for j in range(i, n):
            c = a[i][j] if i == j else a[i][j] + a[j][i]
            if c:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = c
    for i in range(n):
        if b[i]:
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = Fraction(b[i])
    terms[(0,) * n] = Fraction(1)
    return Polynomial(terms, n)


def random_rz_quadratic(rng: random.Random, n: int,
                        lo: int = -3, hi: int = 3):
    """Random rational RZ quadratic with its rank-one certificate.

    Returns (p, b, vs) where b b^T - 4A = sum_{i<n} v_i v_i^T with exactly
    n rational vectors v_i.
    """
    while True:
        b = [Fraction(rng.randint(lo, hi), rng.randint(1, 2)) for _ in range(n)]
        vs = [[Fraction(rng.randint(lo, hi), rng.randint(1, 2)) for _ in range(n)]
              for _ in range(n)]
        p = quadratic_from_vectors(b, vs)
        if p.total_degree == 2:
            return p, b, vs
