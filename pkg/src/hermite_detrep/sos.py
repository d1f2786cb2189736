"""Matrix sum-of-squares machinery for Hermite matrices.

A certificate asserts q^2 * H(p) == scale * Q^T Q as a polynomial identity,
with q homogeneous (constant 1 when no denominator is involved) and Q a
rectangular polynomial matrix whose i-th column is homogeneous of degree
deg(q) + i - 1.  The rational ``scale`` keeps quadratic certificates exact:
their natural Q picks up a factor sqrt(2), which over the rationals is
carried as scale = 2 instead of being folded into Q.

Three ways to obtain certificates:

* ``quadratic_sos``: the closed form for real-zero quadratics, built from a
  rank-one decomposition of b b^T - 4A.
* ``sos_from_detrep``: the forward construction from a definite
  determinantal representation det(I - M) = p^r; stacking the entry vectors
  of I, M, ..., M^(d-1) gives Q^T Q = r * H(p) (with the (1,1) entry of H
  raised to k/r when the representation has excess size k > r d).
* ``find_sos``: a Gram-matrix SDP search for denominator-free certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from . import sdp
from .detrep import LinearPencil
from .hermite import HermiteMatrix, hermite_matrix
from .polynomials import Polynomial, PolyMatrix
from .realzero import psd_rank1_vectors, rz_check_quadratic, rz_quadratic_gram, quadratic_parts


@dataclass
class SosCertificate:
    """Data for the identity q^2 * H == scale * Q^T Q."""

    q: Polynomial
    Q: PolyMatrix
    scale: object = 1
    gram: Optional[np.ndarray] = None
    h11: object = None  # replaces the (1,1) constant of H when set

    @property
    def denominator_degree(self) -> int:
        d = self.q.total_degree
        return 0 if d == float("-inf") else int(d)

    @property
    def column_degrees(self) -> list[int]:
        r = self.denominator_degree
        return [r + i for i in range(self.Q.cols)]

    @property
    def field(self) -> str:
        if self.Q.entries and any(e.field == "double" for e in self.Q.entries):
            return "double"
        return self.q.field


def _column_degrees_ok(cert: SosCertificate) -> bool:
    degs = cert.column_degrees
    for j in range(cert.Q.cols):
        want = degs[j]
        for i in range(cert.Q.rows):
            e = cert.Q.entry(i, j)
            if e and not (e.is_homogeneous() and e.total_degree == want):
                return False
    return True


def _target_matrix(cert: SosCertificate, h: HermiteMatrix) -> PolyMatrix:
    base = h.with_corner(cert.h11) if cert.h11 is not None else h.base
    if cert.field == "double":
        base = base.to_double()
    return base


def verify(cert: SosCertificate, h: HermiteMatrix, tol: float = 1e-8) -> bool:
    """Check the certificate identity against H, exactly or to ``tol``.

    Also enforces the column-degree grading; rational data is compared as an
    exact polynomial identity, double data coefficient-wise.
    """
    if cert.Q.cols != h.degree:
        raise ValueError("certificate width disagrees with the matrix size")
    if not _column_degrees_ok(cert):
        return False
    target = _target_matrix(cert, h).scale(cert.q * cert.q)
    qtq = (cert.Q.T @ cert.Q).scale(cert.scale)
    if cert.field == "rational":
        return target == qtq
    return target.max_coeff_distance(qtq) <= tol


def quadratic_sos(p: Polynomial, vectors: Optional[Sequence[Sequence]] = None,
                  field: Optional[str] = None) -> SosCertificate:
    """Closed-form certificate for a real-zero quadratic p = x^T A x + b^T x + 1.

    With b b^T - 4A = sum v_i v_i^T the matrix with rows (1, -b^T x / 2) and
    (0, v_i^T x / 2) satisfies H(p) = 2 * Q^T Q; all-zero rows are dropped.
    Exact over the rationals whenever the v_i are rational (always when
    b b^T - 4A is diagonal with square entries); otherwise built in doubles
    from an eigenfactorization, with the sqrt(2) folded into Q.
    """
    if p.total_degree != 2:
        raise ValueError("polynomial is not quadratic")
    if not rz_check_quadratic(p):
        raise ValueError("polynomial is not real-zero (b b^T - 4A is not PSD)")
    _, b = quadratic_parts(p)
    if vectors is None:
        vectors = psd_rank1_vectors(rz_quadratic_gram(p), field=field)
    n = p.nvars
    exact = all(not isinstance(c, float) for v in vectors for c in v) \
        and all(not isinstance(c, float) for c in b) and field != "double"
    rows = [[Polynomial.one(n),
             Polynomial.linear_form([-Fraction(bi, 2) if exact else -float(bi) / 2
                                     for bi in b],
                                    "rational" if exact else "double")]]
    for v in vectors:
        if all(c == 0 for c in v):
            continue
        form = Polynomial.linear_form(
            [Fraction(c) / 2 if exact else float(c) / 2 for c in v],
            "rational" if exact else "double")
        rows.append([Polynomial.zero(n), form])
    qmat = PolyMatrix.from_rows(rows)
    if exact:
        return SosCertificate(q=Polynomial.one(n), Q=qmat, scale=Fraction(2))
    return SosCertificate(q=Polynomial.one(n).to_double(),
                          Q=qmat.scale(float(np.sqrt(2.0))), scale=1)


def sos_from_detrep(pencil: LinearPencil, r: int, p: Polynomial,
                    tol: float = 1e-9) -> SosCertificate:
    """Certificate from a determinantal representation det(I - M) = p^r.

    Q stacks, for every matrix position (l, m), the vector of (l, m) entries
    of M^0, ..., M^(d-1); then Q^T Q = r * H(p), except that a representation
    of size k > r*d certifies H with its (1,1) entry raised from d to k/r.
    """
    if r < 1:
        raise ValueError("power must be >= 1")
    mx = pencil.symbolic()
    if pencil.sign_convention == "I_PLUS_M":
        mx = mx.scale(-1)
    k = pencil.size
    nv = mx.nvars
    ident = PolyMatrix.identity(k, nv)
    target = p ** r
    detval = (ident - mx).det()
    if pencil.field == "rational":
        if detval != target:
            raise ValueError("det(I - M) != p^r")
    else:
        if detval.max_coeff_distance(target.to_double()) > tol:
            raise ValueError("det(I - M) != p^r (beyond tolerance)")
    d = int(p.total_degree)
    powers = [PolyMatrix.identity(k, nv)]
    for _ in range(1, d):
        powers.append(powers[-1] @ mx)
    if pencil.field == "double":
        powers = [m.to_double() for m in powers]
    rows = []
    for ell in range(k):
        for mm in range(k):
            rows.append([powers[s].entry(ell, mm) for s in range(d)])
    qmat = PolyMatrix.from_rows(rows)
    h11 = None
    if k > r * d:
        h11 = Fraction(k, r) if pencil.field == "rational" else k / r
    scale = Fraction(1, r) if pencil.field == "rational" else 1.0 / r
    q_one = Polynomial.one(nv)
    if pencil.field == "double":
        q_one = q_one.to_double()
    return SosCertificate(q=q_one, Q=qmat, scale=scale, h11=h11)


# -- Gram-matrix SDP search --------------------------------------------------

def monomials_of_degree(n: int, k: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree k in n variables (deterministic order)."""
    out = []
    for combo in combinations_with_replacement(range(n), k):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


@dataclass
class GramStructure:
    """Index data of the Gram parametrization of H(p) = Q^T Q."""

    index_set: list[tuple[int, tuple[int, ...]]]  # (column i, monomial), i >= 1
    amat: sp.csr_matrix  # constraints, svec coordinates
    b: np.ndarray
    space: sdp.SvecSpace
    corner_constraint: int  # row index of the (1,1) degree-zero constraint


def gram_structure(h: HermiteMatrix, corner: Optional[float] = None) -> GramStructure:
    """Assemble the coefficient-matching constraints for a Gram matrix G.

    G is indexed by pairs (i, alpha) with deg(alpha) = i - 1; matching
    coefficient x^gamma of H_ij yields one equality per (i <= j, gamma),
    over the full degree bases.  ``corner`` overrides the right-hand side of
    the (1,1) constant constraint (the (1,1)-entry relaxation).
    """
    d = h.degree
    n = h.base.nvars
    monos = [monomials_of_degree(n, i) for i in range(d)]
    index_set = [(i + 1, a) for i in range(d) for a in monos[i]]
    flat = {}
    for pos, key in enumerate(index_set):
        flat[key] = pos
    space = sdp.SvecSpace(len(index_set))
    rows, cols, vals, rhs = [], [], [], []
    corner_row = -1
    row_id = 0
    for i in range(1, d + 1):
        for j in range(i, d + 1):
            entry = h.entry(i - 1, j - 1)
            for gamma in monomials_of_degree(n, i + j - 2):
                if i == 1 and j == 1:
                    corner_row = row_id
                coeff = entry.coefficient(gamma)
                target = float(coeff)
                if corner is not None and row_id == corner_row and i == 1 and j == 1:
                    target = float(corner)
                for alpha in monos[i - 1]:
                    beta = tuple(g - a for g, a in zip(gamma, alpha))
                    if any(x < 0 for x in beta) or sum(beta) != j - 1:
                        continue
                    u = flat[(i, alpha)]
                    v = flat[(j, beta)]
                    rows.append(row_id)
                    cols.append(space.index(u, v))
                    vals.append(1.0 if u == v else 1.0 / np.sqrt(2.0))
                rhs.append(target)
                row_id += 1
    amat = sp.csr_matrix(
        (vals, (rows, cols)), shape=(row_id, space.dim))
    amat.sum_duplicates()
    return GramStructure(index_set, amat, np.array(rhs), space, corner_row)


class FindSosStatus(Enum):
    FOUND = "found"
    NOT_FOUND = "not-found"
    INDETERMINATE = "indeterminate"


@dataclass
class FindSosResult:
    status: FindSosStatus
    certificate: Optional[SosCertificate] = None
    residual: float = float("nan")
    ray: Optional[dict] = None
    corner: object = None
    sdp_solution: Optional[sdp.SdpSolution] = None
    message: str = ""

    @property
    def found(self) -> bool:
        return self.status == FindSosStatus.FOUND


def find_sos(h: HermiteMatrix, allow_11_relaxation: bool = False,
             c11_max=None, gap_tol: float = 1e-8, feas_tol: float = 1e-8,
             residual_tol: float = 1e-6, clip_tol: float = 1e-9,
             max_iter: int = 200) -> FindSosResult:
    """Search for a denominator-free certificate H = Q^T Q by SDP.

    The Gram matrix G over the full degree-(i-1) monomial bases must be PSD
    and match every coefficient of H; feasibility is decided by the
    interior-point solver, so a NOT_FOUND comes with a dual improving ray
    and is reported as numerical infeasibility, not as a proof.

    With the (1,1) relaxation the constant entry of H is raised to
    ``c11_max`` (default d*n).  Feasibility at any value in [d, c11_max] is
    equivalent to feasibility at c11_max itself, since adding t * e1 e1^T to
    a Gram matrix raises that entry by t >= 0 while staying PSD; searching
    the endpoint therefore loses nothing.
    """
    corner = None
    if allow_11_relaxation:
        corner = float(c11_max) if c11_max is not None else float(h.degree * h.base.nvars)
        if corner < h.degree:
            raise ValueError("relaxed corner below the degree makes the matrix smaller")
    gs = gram_structure(h, corner=corner)
    dim = len(gs.index_set)
    prob = sdp.SdpProblem.from_svec(dim, gs.amat, gs.b)
    opts = sdp.SdpOptions(gap_tol=gap_tol, feas_tol=feas_tol,
                          max_iter=max_iter, prune=False)
    sol = sdp.solve(prob, opts)
    if sol.status == sdp.SdpStatus.NUMERICAL_LIMIT:
        return FindSosResult(FindSosStatus.INDETERMINATE, sdp_solution=sol,
                             message=f"solver hit its numerical limit: {sol.message}")
    if sol.status == sdp.SdpStatus.INFEASIBLE:
        return FindSosResult(FindSosStatus.NOT_FOUND, ray=sol.ray, corner=corner,
                             sdp_solution=sol,
                             message="Gram problem numerically infeasible")
    gram = 0.5 * (sol.X + sol.X.T)
    lam, vec = np.linalg.eigh(gram)
    keep = lam > clip_tol
    u = (np.sqrt(lam[keep])[:, None] * vec[:, keep].T)
    n = h.base.nvars
    qrows = []
    for row in u:
        entries = []
        for i in range(1, h.degree + 1):
            terms = {}
            for pos, (col, alpha) in enumerate(gs.index_set):
                if col == i and row[pos]:
                    terms[alpha] = float(row[pos])
            entries.append(Polynomial(terms, n))
        qrows.append(entries)
    if not qrows:
        qrows = [[Polynomial.zero(n) for _ in range(h.degree)]]
    cert = SosCertificate(q=Polynomial.one(n).to_double(),
                          Q=PolyMatrix.from_rows(qrows), scale=1,
                          gram=gram, h11=corner)
    target = _target_matrix(cert, h)
    residual = target.max_coeff_distance(cert.Q.T @ cert.Q)
    if residual > residual_tol:
        return FindSosResult(FindSosStatus.INDETERMINATE, certificate=cert,
                             residual=residual, corner=corner, sdp_solution=sol,
                             message=f"solution residual {residual:.2e} exceeds "
                                     f"{residual_tol:.0e}")
    return FindSosResult(FindSosStatus.FOUND, certificate=cert, residual=residual,
                         corner=corner, sdp_solution=sol)


def rationalize_certificate(cert: SosCertificate, h: HermiteMatrix,
                            max_denominator: int = 10 ** 6) -> Optional[SosCertificate]:
    """Round a double certificate to rationals and re-verify exactly.

    Continued-fraction rounding with a denominator bound; returns None when
    the rounded certificate fails exact verification, in which case callers
    must not pretend the exact identity holds.
    """
    def round_poly(p: Polynomial) -> Polynomial:
        return Polynomial({e: Fraction(c).limit_denominator(max_denominator)
                           for e, c in p.terms.items()}, p.nvars)

    q2 = round_poly(cert.q)
    qm = cert.Q.map(round_poly)
    scale = Fraction(cert.scale) if not isinstance(cert.scale, Fraction) \
        else cert.scale
    if isinstance(cert.scale, float):
        scale = Fraction(cert.scale).limit_denominator(max_denominator)
    h11 = cert.h11
    if isinstance(h11, float):
        h11 = Fraction(h11).limit_denominator(max_denominator)
    rounded = SosCertificate(q=q2, Q=qm, scale=scale, gram=cert.gram, h11=h11)
    if verify(rounded, h):
        return rounded
    return None
