"""Operator-splitting solver for the block Hermitian SDP class

    minimize    sum_k tr(Q_k W_k)
    subject to  sum_k tr(M_i W_k) <= b_i          (shared trace inequalities)
                diag(sum_k W_k) = d
                [W_k]_{n,n} = 1                   (per-block corner equality)
                W_k Hermitian PSD.

Blocks are tiny here (n <= 15), so a dense ADMM with per-block eigenvalue
projection is both simple and fast.  Hermitian matrices are embedded into a
real vector space via H -> [vec(Re H); vec(Im H)], which is an isometry for
the trace inner product; the affine projection and the cone projection both
preserve the Hermitian subspace, so no symmetry constraints are needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


class SdpInputError(ValueError):
    """Non-finite or dimensionally inconsistent solver input."""


@dataclass
class BlockSdp:
    """Problem data; all matrices Hermitian with dimension n = block size."""

    objective: list[np.ndarray]                     # Q_k, one per block
    inequalities: list[tuple[np.ndarray, float]]    # (matrix, rhs) pairs
    diag_rhs: np.ndarray                            # length n
    corner_value: float = 1.0

    @property
    def num_blocks(self) -> int:
        return len(self.objective)

    @property
    def dim(self) -> int:
        return self.objective[0].shape[0]

    def validate(self) -> None:
        n = self.dim
        for q in self.objective:
            if q.shape != (n, n) or not np.all(np.isfinite(q)):
                raise SdpInputError("objective blocks must be finite n x n")
            if np.linalg.norm(q - q.conj().T) > 1e-9 * max(1.0, np.linalg.norm(q)):
                raise SdpInputError("objective blocks must be Hermitian")
        for mat, rhs in self.inequalities:
            if mat.shape != (n, n) or not np.isfinite(rhs):
                raise SdpInputError("inequality data must be finite n x n / scalar")
        if self.diag_rhs.shape != (n,) or not np.all(np.isfinite(self.diag_rhs)):
            raise SdpInputError("diag_rhs must be a finite length-n vector")


@dataclass
class SdpSolution:
    blocks: list[np.ndarray]
    objective: float
    residuals: dict
    iterations: int
    status: str
    warm_state: Optional[tuple] = field(default=None, repr=False)


def project_psd(h: np.ndarray) -> np.ndarray:
    """Nearest (Frobenius) PSD matrix: symmetrize, clamp negative eigenvalues."""
    if not np.all(np.isfinite(h)):
        raise SdpInputError("project_psd requires finite entries")
    h = 0.5 * (h + h.conj().T)
    vals, vecs = np.linalg.eigh(h)
    if vals[0] >= 0:
        return h
    vals = np.maximum(vals, 0.0)
    return (vecs * vals) @ vecs.conj().T


def _embed(h: np.ndarray) -> np.ndarray:
    return np.concatenate([h.real.ravel(), h.imag.ravel()])


def _unembed(x: np.ndarray, n: int) -> np.ndarray:
    re = x[: n * n].reshape(n, n)
    im = x[n * n :].reshape(n, n)
    h = re + 1j * im
    return 0.5 * (h + h.conj().T)


def solve_block_sdp(problem: BlockSdp, tol: float = 1e-7, max_iters: int = 20000,
                    warm_state: Optional[tuple] = None) -> SdpSolution:
    """ADMM on the splitting {affine set} / {PSD cone x nonnegative slacks}.

    Deterministic: identical problem and settings produce identical iterates.
    warm_state (from a previous SdpSolution) restarts the iteration from the
    previous (z, u, rho) triple.
    """
    problem.validate()
    if tol <= 0:
        raise SdpInputError("tol must be > 0")
    n = problem.dim
    n_blocks = problem.num_blocks
    n_ineq = len(problem.inequalities)
    blk = 2 * n * n
    dim = blk * n_blocks + n_ineq

    # objective vector (same Q applied per its block)
    c = np.zeros(dim)
    for k, q in enumerate(problem.objective):
        c[k * blk : (k + 1) * blk] = _embed(q)
    c_scale = max(1.0, np.max(np.abs(c)))
    c_work = c / c_scale

    # constraint rows: n diagonal equalities, n_blocks corner equalities,
    # n_ineq slack-augmented trace inequalities
    rows = []
    rhs = []
    for j in range(n):
        row = np.zeros(dim)
        for k in range(n_blocks):
            row[k * blk + j * n + j] = 1.0
        rows.append(row)
        rhs.append(float(problem.diag_rhs[j]))
    corner = (n - 1) * n + (n - 1)
    for k in range(n_blocks):
        row = np.zeros(dim)
        row[k * blk + corner] = 1.0
        rows.append(row)
        rhs.append(float(problem.corner_value))
    for i, (mat, b) in enumerate(problem.inequalities):
        row = np.zeros(dim)
        emb = _embed(0.5 * (mat + mat.conj().T))
        for k in range(n_blocks):
            row[k * blk : (k + 1) * blk] = emb
        row[blk * n_blocks + i] = 1.0
        rows.append(row)
        rhs.append(float(b))
    a_mat = np.array(rows)
    b_vec = np.array(rhs)

    # row equilibration keeps AA^T well conditioned despite mixed scales
    row_scale = np.maximum(np.max(np.abs(a_mat), axis=1), 1e-300)
    a_mat = a_mat / row_scale[:, None]
    b_vec = b_vec / row_scale

    gram_pinv = np.linalg.pinv(a_mat @ a_mat.T, rcond=1e-12)

    # consistency check of the affine set
    x_ls = a_mat.T @ (gram_pinv @ b_vec)
    if np.max(np.abs(a_mat @ x_ls - b_vec)) > 1e-7 * (1.0 + np.max(np.abs(b_vec))):
        return SdpSolution([], float("nan"),
                           {"affine_inconsistency": float(np.max(np.abs(a_mat @ x_ls - b_vec)))},
                           0, "infeasible")

    def proj_affine(v: np.ndarray) -> np.ndarray:
        return v + a_mat.T @ (gram_pinv @ (b_vec - a_mat @ v))

    def proj_cone(v: np.ndarray) -> np.ndarray:
        out = np.empty_like(v)
        for k in range(n_blocks):
            seg = v[k * blk : (k + 1) * blk]
            out[k * blk : (k + 1) * blk] = _embed(project_psd(_unembed(seg, n)))
        out[blk * n_blocks :] = np.maximum(v[blk * n_blocks :], 0.0)
        return out

    if warm_state is not None:
        z, u, rho = warm_state
        z, u = z.copy(), u.copy()
    else:
        z = np.zeros(dim)
        u = np.zeros(dim)
        rho = 1.0
    relax = 1.6

    status = "inaccurate"
    iters = max_iters
    for it in range(1, max_iters + 1):
        x = proj_affine(z - u - c_work / rho)
        x_hat = relax * x + (1.0 - relax) * z
        z_prev = z
        z = proj_cone(x_hat + u)
        u = u + x_hat - z

        if it % 10 == 0 or it == max_iters:
            r_primal = np.max(np.abs(x - z))
            r_dual = rho * np.max(np.abs(z - z_prev))
            x_scale = 1.0 + max(np.max(np.abs(x)), np.max(np.abs(z)))
            u_scale = 1.0 + rho * np.max(np.abs(u))
            if r_primal <= tol * x_scale and r_dual <= tol * u_scale:
                status = "optimal"
                iters = it
                break
            if it % 50 == 0:
                if r_primal > 10.0 * r_dual and rho < 1e8:
                    rho *= 2.0
                    u /= 2.0
                elif r_dual > 10.0 * r_primal and rho > 1e-8:
                    rho /= 2.0
                    u *= 2.0

    blocks = [_unembed(z[k * blk : (k + 1) * blk], n) for k in range(n_blocks)]
    objective = float(sum(np.trace(q @ w).real for q, w in zip(problem.objective, blocks)))

    total = sum(blocks)
    diag_res = float(np.max(np.abs(np.diag(total).real - problem.diag_rhs)))
    corner_res = float(max(abs(w[n - 1, n - 1].real - problem.corner_value) for w in blocks))
    ineq_res = 0.0
    for mat, b in problem.inequalities:
        val = sum(np.trace(mat @ w).real for w in blocks)
        ineq_res = max(ineq_res, max(0.0, val - b))
    min_eig = float(min(np.linalg.eigvalsh(w)[0] for w in blocks))

    # KKT-style stationarity certificate: multipliers from least squares on
    # c + A^T y + rho*u = 0, evaluated in the equilibrated frame
    y, *_ = np.linalg.lstsq(a_mat.T, -(c_work + rho * u), rcond=None)
    stationarity = float(np.max(np.abs(c_work + a_mat.T @ y + rho * u))) * c_scale
    dual_obj = float(-(y @ b_vec)) * c_scale

    residuals = {
        "diag_equality": diag_res,
        "corner_equality": corner_res,
        "inequality": ineq_res,
        "min_eigenvalue": min_eig,
        "primal": float(np.max(np.abs(x - z))),
        "stationarity": stationarity,
        "duality_gap": abs(objective - dual_obj),
    }
    return SdpSolution(blocks, objective, residuals, iters, status,
                       warm_state=(z, u, rho))
