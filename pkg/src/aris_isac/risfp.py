"""Active-RIS beamformer update with the transmit beamformer fixed.

The weighted sum-rate objective is detached from the logarithm with a
Lagrangian dual transform (auxiliary alpha, optimal at the SINR), the
resulting ratio objective is linearized with a quadratic transform
(auxiliary epsilon), and the diagonal RIS matrix is pulled out of the
bilinear forms, leaving a concave QCQP in psi with one quadratic power
constraint, solved in closed form via a Lagrange-multiplier bisection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import NoiseModel
from .metrics import amplified_noise, effective_channels, sinr_all


@dataclass
class QuadraticForm:
    """Coefficients of max 2 Re(psi^H v) - psi^H U psi s.t. psi^H Pi psi <= budget."""

    v: np.ndarray
    u_mat: np.ndarray
    pi_mat: np.ndarray
    budget: float


def update_alpha(gamma: np.ndarray) -> np.ndarray:
    """Optimal dual-transform auxiliaries equal the current SINRs."""
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0):
        raise ValueError("SINRs must be nonnegative")
    return gamma.copy()


def update_epsilon(t: np.ndarray, h_eff: np.ndarray, h_ris: np.ndarray, psi: np.ndarray,
                   noise: NoiseModel, weights: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Closed-form quadratic-transform auxiliaries."""
    gains = np.abs(h_eff.conj() @ t) ** 2
    denom = gains.sum(axis=1) + amplified_noise(h_ris, psi, noise.ris_noise_w) + noise.user_noise_w
    num = np.sqrt(np.asarray(weights) * (1.0 + alpha)) * np.einsum("km,mk->k", h_eff.conj(), t)
    return num / denom


def assemble_quadratic(t: np.ndarray, g: np.ndarray, h_direct: np.ndarray,
                       h_ris: np.ndarray, eps: np.ndarray, alpha: np.ndarray,
                       weights: np.ndarray, ris_noise_w: float, budget: float) -> QuadraticForm:
    """Collect the psi-linear and psi-quadratic coefficients.

    With D_k = diag(h_rk^H):
      v  = sum_k eps_k^* sqrt(mu_k (1+alpha_k)) D_k G t_k
               - |eps_k|^2 D_k G (T T^H) h_dk
      U  = sum_k |eps_k|^2 (D_k G (T T^H) G^H D_k^H + sigma_1^2 D_k D_k^H)
      Pi = sum_k diag(G t_k) diag(G t_k)^H + sigma_1^2 I.
    Both U terms enter positively, keeping U PSD and the subproblem concave.
    """
    n = g.shape[0]
    k_users = h_ris.shape[0]
    tt = t @ t.conj().T                       # (M_s, M_s)
    gt = g @ t                                # (N, K)
    v = np.zeros(n, dtype=complex)
    u_mat = np.zeros((n, n), dtype=complex)
    for k in range(k_users):
        d_k = h_ris[k].conj()                 # diagonal of D_k
        scale = np.sqrt(weights[k] * (1.0 + alpha[k]))
        v += np.conj(eps[k]) * scale * (d_k * gt[:, k])
        v -= np.abs(eps[k]) ** 2 * (d_k * (g @ (tt @ h_direct[k])))
        gk = d_k[:, None] * g                 # D_k G
        u_mat += np.abs(eps[k]) ** 2 * (gk @ tt @ gk.conj().T)
        u_mat += np.abs(eps[k]) ** 2 * ris_noise_w * np.diag(np.abs(d_k) ** 2)
    pi_mat = (gt * gt.conj()) @ np.ones(t.shape[1]) # diagonal of sum_k |G t_k|^2
    pi_mat = np.diag(pi_mat.real) + ris_noise_w * np.eye(n)
    u_mat = 0.5 * (u_mat + u_mat.conj().T)
    return QuadraticForm(v=v, u_mat=u_mat, pi_mat=pi_mat, budget=budget)


def _constraint_value(q: QuadraticForm, psi: np.ndarray) -> float:
    return float((psi.conj() @ q.pi_mat @ psi).real)


def solve_psi_qcqp(q: QuadraticForm, tol: float = 1e-9) -> np.ndarray:
    """Maximize the concave quadratic objective under the RIS power cap.

    If the unconstrained stationary point U psi = v is feasible it is
    returned directly; otherwise psi(lam) = (U + lam*Pi)^-1 v with lam > 0
    found by bisection on the monotone decreasing power gap
    g(lam) = psi^H Pi psi - budget.
    """
    if not (np.all(np.isfinite(q.v)) and np.all(np.isfinite(q.u_mat))
            and np.all(np.isfinite(q.pi_mat))):
        raise ValueError("non-finite QCQP data")
    n = q.v.shape[0]
    if q.budget <= 0 or np.linalg.norm(q.v) == 0:
        return np.zeros(n, dtype=complex)

    # interior optimum when U is (numerically) nonsingular
    eigs = np.linalg.eigvalsh(q.u_mat)
    if eigs[0] > max(1e-13 * max(eigs[-1], 0.0), 1e-300):
        psi0 = scipy.linalg.solve(q.u_mat, q.v, assume_a="pos")
        if _constraint_value(q, psi0) <= q.budget:
            return psi0

    def psi_of(lam: float) -> np.ndarray:
        return scipy.linalg.solve(q.u_mat + lam * q.pi_mat, q.v, assume_a="pos")

    def gap(lam: float) -> float:
        return _constraint_value(q, psi_of(lam)) - q.budget

    # geometric bracket growth until the constraint is slack
    lam_hi = max(np.linalg.norm(q.v) / (np.sqrt(q.budget) * np.min(np.diag(q.pi_mat).real)), 1e-12)
    for _ in range(300):
        if gap(lam_hi) < 0:
            break
        lam_hi *= 2.0
    lam_lo = 0.0
    g_tol = max(1e-10, tol * q.budget)
    lam = lam_hi
    for _ in range(200):
        lam = 0.5 * (lam_lo + lam_hi)
        g_val = gap(lam)
        if abs(g_val) <= g_tol:
            break
        if g_val > 0:
            lam_lo = lam
        else:
            lam_hi = lam
    psi = psi_of(lam)
    power = _constraint_value(q, psi)
    if power > q.budget:
        psi = psi * np.sqrt(q.budget / power)
    return psi


def split_psi(psi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition into amplitudes and phases; zero entries get phase 0."""
    if not np.all(np.isfinite(psi)):
        raise ValueError("psi must be finite")
    amplitudes = np.abs(psi)
    phases = np.where(amplitudes > 0, np.angle(psi), 0.0)
    return amplitudes, phases


def ris_pass(t: np.ndarray, g: np.ndarray, h_direct: np.ndarray, h_ris: np.ndarray,
             psi: np.ndarray, noise: NoiseModel, weights: np.ndarray,
             budget: float) -> np.ndarray:
    """One full alpha / epsilon / psi block update for fixed T.

    Never decreases the weighted sum-rate (ascent property of the FP
    framework); the caller may still guard against bisection round-off.
    """
    h_eff = effective_channels(h_direct, g, psi, h_ris)
    gamma = sinr_all(t, h_eff, h_ris, psi, noise)
    alpha = update_alpha(gamma)
    eps = update_epsilon(t, h_eff, h_ris, psi, noise, weights, alpha)
    q = assemble_quadratic(t, g, h_direct, h_ris, eps, alpha, weights,
                           noise.ris_noise_w, budget)
    return solve_psi_qcqp(q)
