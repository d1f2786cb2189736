"""Small dense semidefinite-programming solver.

Standard primal form over one PSD block:

    min <C, X>   s.t.  <A_i, X> = b_i  (i = 1..m),  X >= 0,

solved by a primal-dual path-following interior-point method on the
homogeneous self-dual embedding, so infeasibility comes out as a certified
ray rather than a guess.  Search directions are HKM with Mehrotra
predictor-corrector; the Schur complement is dense and factored by
Cholesky with a tiny diagonal regularization.

Symmetric matrices travel through the solver in scaled vector form
("svec": upper triangle, off-diagonal entries times sqrt(2)), which makes
<A, B> an ordinary dot product.  Everything is double precision; exact
verification of anything derived from an SDP solution happens downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp


class SdpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    NUMERICAL_LIMIT = "numerical-limit"


class SvecSpace:
    """Index bookkeeping for the svec isometry on s x s symmetric matrices."""

    def __init__(self, s: int):
        self.s = s
        iu = np.triu_indices(s)
        self.rows, self.cols = iu
        self.dim = len(self.rows)
        self.scale = np.where(self.rows == self.cols, 1.0, np.sqrt(2.0))

    def svec(self, m: np.ndarray) -> np.ndarray:
        return m[self.rows, self.cols] * self.scale

    def svec_batch(self, ms: np.ndarray) -> np.ndarray:
        return ms[..., self.rows, self.cols] * self.scale

    def smat(self, v: np.ndarray) -> np.ndarray:
        m = np.zeros((self.s, self.s))
        vals = v / self.scale
        m[self.rows, self.cols] = vals
        m[self.cols, self.rows] = vals
        return m

    def index(self, i: int, j: int) -> int:
        i, j = min(i, j), max(i, j)
        # row-major position within the upper triangle
        return i * self.s - i * (i - 1) // 2 + (j - i)


class SdpProblem:
    """Equality-constrained SDP data over one PSD variable of size ``dim``."""

    def __init__(self, dim: int, constraints: Sequence[tuple], objective=None):
        self.dim = dim
        self.space = SvecSpace(dim)
        rows = []
        rhs = []
        for a, bi in constraints:
            a = np.asarray(a, dtype=float)
            if a.shape != (dim, dim):
                raise ValueError("constraint matrix has wrong shape")
            if not np.allclose(a, a.T, atol=1e-12):
                raise ValueError("constraint matrix is not symmetric")
            rows.append(self.space.svec(a))
            rhs.append(float(bi))
        self.amat = np.array(rows) if rows else np.zeros((0, self.space.dim))
        self.b = np.array(rhs)
        if objective is None:
            objective = np.zeros((dim, dim))
        objective = np.asarray(objective, dtype=float)
        if objective.shape != (dim, dim):
            raise ValueError("objective has wrong shape")
        if not np.allclose(objective, objective.T, atol=1e-12):
            raise ValueError("objective is not symmetric")
        self.c = self.space.svec(objective)

    @classmethod
    def from_svec(cls, dim: int, amat, b, c=None) -> "SdpProblem":
        """Construct directly from svec-encoded data (amat may be sparse)."""
        prob = cls.__new__(cls)
        prob.dim = dim
        prob.space = SvecSpace(dim)
        if sp.issparse(amat):
            prob.amat = amat.tocsr()
        else:
            prob.amat = np.asarray(amat, dtype=float)
        if prob.amat.shape[1] != prob.space.dim:
            raise ValueError("svec width mismatch")
        prob.b = np.asarray(b, dtype=float)
        prob.c = np.zeros(prob.space.dim) if c is None else np.asarray(c, dtype=float)
        return prob

    @property
    def n_constraints(self) -> int:
        return self.amat.shape[0]


@dataclass
class SdpSolution:
    status: SdpStatus
    X: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    Z: Optional[np.ndarray] = None
    gap: float = float("nan")
    residuals: dict = field(default_factory=dict)
    ray: Optional[dict] = None
    iterations: int = 0
    message: str = ""


@dataclass
class SdpOptions:
    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iter: int = 200
    step_fraction: float = 0.98
    cholesky_reg: float = 1e-12
    prune: bool = True


def _prune_dependent(amat: np.ndarray, b: np.ndarray, tol: float):
    """Drop linearly dependent constraint rows via rank-revealing QR.

    Returns (keep_indices, None) or (None, ray) when a dependent row is
    inconsistent, in which case the ray is an exact Farkas certificate.
    """
    m = amat.shape[0]
    if m <= 1:
        return np.arange(m), None
    q, r, piv = sla.qr(amat.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    ref = diag[0] if diag.size and diag[0] > 0 else 1.0
    rank = int(np.sum(diag > max(tol, 1e-13) * ref))
    if rank == m:
        return np.arange(m), None
    keep = np.sort(piv[:rank])
    drop = np.sort(piv[rank:])
    a_keep = amat[keep]
    for j in drop:
        gamma, *_ = np.linalg.lstsq(a_keep.T, amat[j], rcond=None)
        mismatch = b[j] - gamma @ b[keep]
        if abs(mismatch) > tol * (1.0 + abs(b[j])):
            y = np.zeros(m)
            y[keep] = -gamma
            y[j] = 1.0
            y /= mismatch  # now b @ y = 1, A^T y ~= 0
            return None, {"y": y, "kind": "primal-infeasible",
                          "margin": 0.0, "b_dot_y": 1.0}
    return keep, None


def _max_psd_step(m: np.ndarray, dm: np.ndarray) -> float:
    """Largest alpha with m + alpha*dm still PSD (m positive definite)."""
    lchol = np.linalg.cholesky(m)
    t = sla.solve_triangular(lchol, dm, lower=True)
    w = sla.solve_triangular(lchol, t.T, lower=True)
    lam = np.linalg.eigvalsh(0.5 * (w + w.T)).min()
    if lam >= -1e-14:
        return np.inf
    return -1.0 / lam


class _Iterate:
    def __init__(self, prob: SdpProblem):
        s = prob.dim
        self.X = np.eye(s)
        self.Z = np.eye(s)
        self.y = np.zeros(prob.n_constraints)
        self.tau = 1.0
        self.kappa = 1.0


def solve(prob: SdpProblem, opts: Optional[SdpOptions] = None) -> SdpSolution:
    """Solve the SDP; returns OPTIMAL, INFEASIBLE (with ray), or NUMERICAL_LIMIT."""
    opts = opts or SdpOptions()
    space = prob.space
    s = prob.dim
    amat, b, c = prob.amat, prob.b.copy(), prob.c
    m = amat.shape[0]
    full_m = m

    keep = np.arange(m)
    if m == 0:
        return _solve_unconstrained(prob, opts)
    if opts.prune and not sp.issparse(amat):
        keep, ray = _prune_dependent(amat, b, opts.feas_tol)
        if keep is None:
            return SdpSolution(SdpStatus.INFEASIBLE, ray=ray,
                               message="inconsistent dependent constraints")
        if len(keep) < m:
            amat = amat[keep]
            b = b[keep]
            m = len(keep)

    sparse_a = sp.issparse(amat)
    if sparse_a:
        amat = amat.tocsr()
        amats = None
    else:
        amats = np.stack([space.smat(amat[i]) for i in range(m)])

    it = _Iterate(prob)
    it.y = np.zeros(m)
    norm_b = 1.0 + np.linalg.norm(b)
    norm_c = 1.0 + np.linalg.norm(c)

    def apply_k(u_vec, x_mat, zi_mat):
        u = space.smat(u_vec)
        w = x_mat @ u @ zi_mat
        return space.svec(0.5 * (w + w.T))

    def schur(x_mat, zi_mat):
        if not sparse_a:
            t = np.einsum("ab,ibc,cd->iad", x_mat, amats, zi_mat)
            t = 0.5 * (t + np.transpose(t, (0, 2, 1)))
            kat = space.svec_batch(t).T  # (L, m)
            return amat @ kat, kat
        kat = np.empty((space.dim, m))
        chunk = max(1, int(2e7 // max(space.dim, 1)))
        for start in range(0, m, chunk):
            stop = min(m, start + chunk)
            for i in range(start, stop):
                ai = space.smat(np.asarray(amat[i].todense()).ravel())
                w = x_mat @ ai @ zi_mat
                kat[:, i] = space.svec(0.5 * (w + w.T))
        return amat @ kat, kat

    def finish_optimal(xv, yv, zv, tau):
        x_mat = space.smat(xv) / tau
        z_mat = space.smat(zv) / tau
        y_full = np.zeros(full_m)
        y_full[keep] = yv / tau
        gap = float(np.vdot(xv, zv) / tau ** 2)
        res = {
            "primal": float(np.linalg.norm(amat @ xv - b * tau) / (tau * norm_b)),
            "dual": float(np.linalg.norm(amat.T @ yv + zv - c * tau) / (tau * norm_c)),
        }
        return SdpSolution(SdpStatus.OPTIMAL, X=x_mat, y=y_full, Z=z_mat,
                           gap=gap, residuals=res)

    x = space.svec(it.X)
    z = space.svec(it.Z)
    y = it.y
    tau, kappa = it.tau, it.kappa
    prev_mu = np.inf
    stall = 0

    for iteration in range(1, opts.max_iter + 1):
        mu = (x @ z + tau * kappa) / (s + 1)
        if not np.isfinite(mu) or not np.isfinite(x).all() or not np.isfinite(z).all():
            return SdpSolution(SdpStatus.NUMERICAL_LIMIT, iterations=iteration,
                               message="non-finite iterate")

        # -- convergence / certificate tests -------------------------------
        pres = np.linalg.norm(amat @ x - b * tau) / (tau * norm_b)
        dres = np.linalg.norm(amat.T @ y + z - c * tau) / (tau * norm_c)
        pobj = (c @ x) / tau
        dobj = (b @ y) / tau
        gap_abs = (x @ z) / tau ** 2
        relgap = abs(pobj - dobj) / (1.0 + max(abs(pobj), abs(dobj)))
        if pres <= opts.feas_tol and dres <= opts.feas_tol and \
                (gap_abs <= opts.gap_tol or relgap <= opts.gap_tol):
            sol = finish_optimal(x, y, z, tau)
            sol.iterations = iteration
            return sol

        by = b @ y
        if by > 0:
            cert = np.linalg.norm(amat.T @ y + z) / by
            if cert <= opts.feas_tol:
                y_ray = np.zeros(full_m)
                y_ray[keep] = y / by
                z_ray = space.smat(z) / by
                margin = float(np.linalg.eigvalsh(z_ray).min())
                return SdpSolution(
                    SdpStatus.INFEASIBLE, iterations=iteration,
                    ray={"y": y_ray, "Z": z_ray, "kind": "primal-infeasible",
                         "margin": margin, "b_dot_y": 1.0},
                    message="primal infeasibility certificate found")
        cx = c @ x
        if cx < 0:
            cert = np.linalg.norm(amat @ x) / (-cx)
            if cert <= opts.feas_tol:
                x_ray = space.smat(x) / (-cx)
                margin = float(np.linalg.eigvalsh(x_ray).min())
                return SdpSolution(
                    SdpStatus.INFEASIBLE, iterations=iteration,
                    ray={"X": x_ray, "kind": "dual-infeasible", "margin": margin},
                    message="dual infeasibility certificate (objective ray) found")

        if mu < prev_mu * 0.9999:
            stall = 0
        else:
            stall += 1
            if stall > 30:
                return SdpSolution(SdpStatus.NUMERICAL_LIMIT, iterations=iteration,
                                   message="progress stalled")
        prev_mu = mu

        # -- factorizations -------------------------------------------------
        x_mat = space.smat(x)
        z_mat = space.smat(z)
        try:
            z_chol = np.linalg.cholesky(z_mat)
        except np.linalg.LinAlgError:
            return SdpSolution(SdpStatus.NUMERICAL_LIMIT, iterations=iteration,
                               message="Z lost definiteness")
        zi = sla.cho_solve((z_chol, True), np.eye(s))
        zi = 0.5 * (zi + zi.T)

        smat_schur, _ = schur(x_mat, zi)
        smat_schur = 0.5 * (smat_schur + smat_schur.T)
        reg = opts.cholesky_reg
        factor = None
        for _ in range(8):
            try:
                factor = sla.cho_factor(
                    smat_schur + reg * np.eye(m), lower=True)
                break
            except np.linalg.LinAlgError:
                reg *= 100.0
        if factor is None:
            return SdpSolution(SdpStatus.NUMERICAL_LIMIT, iterations=iteration,
                               message="Schur complement not factorizable")

        r_p = amat @ x - b * tau
        r_d = amat.T @ y + z - c * tau
        r_g = c @ x - b @ y + kappa
        kc = apply_k(c, x_mat, zi)
        krd = apply_k(r_d, x_mat, zi)
        akc = amat @ kc
        u2 = sla.cho_solve(factor, akc + b)

        def direction(sigma, corr_mat, corr_tk):
            h = sigma * mu * space.svec(zi) - x
            if corr_mat is not None:
                h = h - space.svec(corr_mat)
            rhs1 = -(1 - sigma) * r_p - amat @ h - (1 - sigma) * (amat @ krd)
            u1 = sla.cho_solve(factor, rhs1)
            e0 = (sigma * mu - tau * kappa - corr_tk) / tau
            denom = akc @ u2 - b @ u2 - c @ kc - kappa / tau
            num = (-(1 - sigma) * r_g - c @ h - (1 - sigma) * (c @ krd)
                   - akc @ u1 + b @ u1 - e0)
            if abs(denom) < 1e-300:
                raise FloatingPointError("degenerate tau equation")
            dtau = num / denom
            dy = u1 + dtau * u2
            dz = -(1 - sigma) * r_d - amat.T @ dy + c * dtau
            dx = h - apply_k(dz, x_mat, zi)
            dkappa = e0 - (kappa / tau) * dtau
            return dx, dy, dz, dtau, dkappa

        def boundary(dx, dz, dtau, dkappa):
            alpha = _max_psd_step(x_mat, space.smat(dx))
            alpha = min(alpha, _max_psd_step(z_mat, space.smat(dz)))
            if dtau < 0:
                alpha = min(alpha, -tau / dtau)
            if dkappa < 0:
                alpha = min(alpha, -kappa / dkappa)
            return alpha

        try:
            aff = direction(0.0, None, 0.0)
        except (FloatingPointError, np.linalg.LinAlgError):
            return SdpSolution(SdpStatus.NUMERICAL_LIMIT, iterations=iteration,
                               message="affine direction failed")
        a_aff = min(1.0, boundary(aff[0], aff[2], aff[3], aff[4]))
        mu_aff = ((x + a_aff * aff[0]) @ (z + a_aff * aff[2]) +
                  (tau + a_aff * aff[3]) * (kappa + a_aff * aff[4])) / (s + 1)
        sigma = float(np.clip((max(mu_aff, 0.0) / mu) ** 3, 1e-10, 1.0 - 1e-10))

        dxa = space.smat(aff[0])
        dza = space.smat(aff[2])
        corr = dxa @ dza @ zi
        corr = 0.5 * (corr + corr.T)
        try:
            dx, dy, dz, dtau, dkappa = direction(sigma, corr, aff[3] * aff[4])
        except (FloatingPointError, np.linalg.LinAlgError):
            return SdpSolution(SdpStatus.NUMERICAL_LIMIT, iterations=iteration,
                               message="corrector direction failed")

        alpha = boundary(dx, dz, dtau, dkappa)
        alpha = min(1.0, opts.step_fraction * alpha)
        if alpha <= 1e-13:
            return SdpSolution(SdpStatus.NUMERICAL_LIMIT, iterations=iteration,
                               message="step length collapsed")

        x = x + alpha * dx
        z = z + alpha * dz
        y = y + alpha * dy
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkappa
        if tau < 1e-14 and kappa < 1e-14:
            return SdpSolution(SdpStatus.NUMERICAL_LIMIT, iterations=iteration,
                               message="tau and kappa both collapsed")

    return SdpSolution(SdpStatus.NUMERICAL_LIMIT, iterations=opts.max_iter,
                       message="iteration limit reached")


def _solve_unconstrained(prob: SdpProblem, opts: SdpOptions) -> SdpSolution:
    """min <C, X> over X >= 0 with no equality constraints."""
    c_mat = prob.space.smat(prob.c)
    lam, vec = np.linalg.eigh(c_mat)
    if lam.min() >= -opts.feas_tol:
        zero = np.zeros((prob.dim, prob.dim))
        return SdpSolution(SdpStatus.OPTIMAL, X=zero, y=np.zeros(0),
                           Z=c_mat, gap=0.0,
                           residuals={"primal": 0.0, "dual": 0.0})
    v = vec[:, 0]
    ray = np.outer(v, v)
    return SdpSolution(SdpStatus.INFEASIBLE,
                       ray={"X": ray, "kind": "dual-infeasible",
                            "margin": 0.0},
                       message="objective unbounded below on the PSD cone")
