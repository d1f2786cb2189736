"""Newton sums and the parametrized Hermite matrix.

For p with p(0) = 1 of degree d, view the homogenization
P(x, t) = t^d + p_1 t^(d-1) + ... + p_d as a monic polynomial in t, where
p_i is the degree-i homogeneous part of p.  The k-th Newton sum N_k is the
k-th power sum of the roots of P in t, a homogeneous polynomial of degree k
in x, computed from the coefficients alone through Newton's identity

    k*p_k + sum_{i=0}^{k-1} p_i N_{k-i} = 0      (p_k := 0 for k > d).

The Hermite matrix is the d x d Hankel matrix (N_{i+j-2})_{ij}.  Classical
root counting: its rank is the number of distinct complex roots and its
signature the number of distinct real roots, so p is a real-zero polynomial
exactly when the matrix is positive semidefinite at every point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exact_linalg as ela
from .polynomials import Polynomial, PolyMatrix


def _require_unit_constant(p: Polynomial):
    if p.constant_term() != 1:
        raise ValueError("polynomial must satisfy p(0) = 1")


def newton_sums(p: Polynomial, up_to: int) -> list[Polynomial]:
    """Newton sums N_0..N_up_to of the homogenization of p, N_0 = deg p."""
    _require_unit_constant(p)
    d = p.total_degree
    if d == float("-inf") or d < 0:
        raise ValueError("zero polynomial has no Newton sums")
    d = int(d)
    parts = [p.homogeneous_part(i) for i in range(d + 1)]
    n = p.nvars
    sums = [Polynomial.constant(d, n)]
    for k in range(1, up_to + 1):
        acc = Polynomial.zero(n)
        if k <= d:
            acc = acc - k * parts[k]
        for i in range(1, min(k - 1, d) + 1):
            if parts[i] and sums[k - i]:
                acc = acc - parts[i] * sums[k - i]
        sums.append(acc)
    return sums


@dataclass(frozen=True)
class HermiteMatrix:
    """Hankel matrix of Newton sums of p; entry (i,j) = N_{i+j-2}."""

    base: PolyMatrix
    degree: int
    source: Polynomial

    def entry(self, i: int, j: int) -> Polynomial:
        return self.base.entry(i, j)

    def evaluate(self, point: Sequence) -> list[list]:
        return self.base.evaluate(point)

    def with_corner(self, value) -> PolyMatrix:
        """Copy of the underlying matrix with the (1,1) entry replaced.

        A determinantal representation of excess size certifies the matrix
        with its top-left constant raised above the degree, so verification
        sometimes runs against this adjusted form.
        """
        entries = list(self.base.entries)
        entries[0] = Polynomial.constant(value, self.base.nvars,
                                         "double" if isinstance(value, float) else "rational")
        return PolyMatrix(self.base.rows, self.base.cols, entries)


def hermite_matrix(p: Polynomial) -> HermiteMatrix:
    """The d x d parametrized Hermite matrix of p (requires p(0) = 1)."""
    _require_unit_constant(p)
    d = p.total_degree
    if d == float("-inf") or int(d) < 1:
        raise ValueError("degree must be at least 1")
    d = int(d)
    sums = newton_sums(p, 2 * d - 2)
    entries = [sums[i + j] for i in range(d) for j in range(d)]
    return HermiteMatrix(PolyMatrix(d, d, entries, symmetric=True), d, p)


def univariate_hermite(f: Polynomial) -> list[list[Fraction]]:
    """Numeric Hankel matrix of Newton sums of a monic univariate polynomial."""
    if f.nvars != 1:
        raise ValueError("polynomial must be univariate")
    d = f.total_degree
    if d == float("-inf") or int(d) < 1:
        raise ValueError("degree must be at least 1")
    d = int(d)
    if f.coefficient((d,)) != 1:
        raise ValueError("polynomial must be monic")
    # coefficient of t^(d-i) plays the role of the i-th homogeneous part
    a = [f.coefficient((d - i,)) for i in range(d + 1)]
    sums = [Fraction(d) if not isinstance(a[0], float) else float(d)]
    for k in range(1, 2 * d - 1):
        acc = -k * a[k] if k <= d else 0 * sums[0]
        for i in range(1, min(k - 1, d) + 1):
            acc = acc - a[i] * sums[k - i]
        sums.append(acc)
    return [[sums[i + j] for j in range(d)] for i in range(d)]


def rank_and_signature(s) -> tuple[int, int]:
    """Exact (rank, signature) of a symmetric rational matrix.

    On the Hermite matrix of a monic univariate polynomial these are the
    counts of distinct complex and distinct real roots respectively.
    """
    return ela.rank_and_signature(ela.frac_matrix(s))


def is_psd(s) -> bool:
    """Exact PSD test for a symmetric rational matrix."""
    return ela.is_psd(ela.frac_matrix(s))
