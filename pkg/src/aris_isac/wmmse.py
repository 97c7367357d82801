"""Transmit-beamformer update with the RIS state fixed.

The weighted sum-rate problem is rewritten as a weighted MMSE minimization
(MMSE receivers s_k, errors e_k, weights omega_k = mu_k / e_k), homogenized
by lifting each beam to t~_k = [z_k t_k; z_k] with |z_k| = 1, relaxed to a
block SDP over W_k = t~_k t~_k^H, and mapped back to a feasible beamformer
by principal-eigenvector truncation with feasibility repair (Gaussian
randomization as fallback).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import NoiseModel, PowerBudget
from .metrics import amplified_noise, radar_power, ris_power, wsr
from .sdp import BlockSdp, SdpSolution, solve_block_sdp

# internal feasibility margin, stricter than any reporting tolerance
_FEAS_RTOL = 1e-8


class InfeasibleRisBudgetError(ValueError):
    """RIS noise floor alone exceeds the RIS power budget (P~_a < 0)."""


class RankOneRecoveryError(RuntimeError):
    """No feasible beamformer found by truncation or randomization."""

    def __init__(self, msg: str, diagnostics: Optional[dict] = None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


def mmse_receivers(t: np.ndarray, h_eff: np.ndarray, h_ris: np.ndarray, psi: np.ndarray,
                   noise: NoiseModel) -> np.ndarray:
    """Optimal linear symbol estimators s_k = t_k^H h_k / (total received power)."""
    gains = np.abs(h_eff.conj() @ t) ** 2
    denom = gains.sum(axis=1) + amplified_noise(h_ris, psi, noise.ris_noise_w) + noise.user_noise_w
    num = np.einsum("mk,km->k", t.conj(), h_eff)
    return num / denom


def mmse_errors(t: np.ndarray, h_eff: np.ndarray, h_ris: np.ndarray, psi: np.ndarray,
                noise: NoiseModel) -> np.ndarray:
    """MMSE symbol errors; algebraically equal to 1 / (1 + SINR_k)."""
    gains = np.abs(h_eff.conj() @ t) ** 2
    denom = gains.sum(axis=1) + amplified_noise(h_ris, psi, noise.ris_noise_w) + noise.user_noise_w
    return 1.0 - np.diag(gains) / denom


def wmmse_weights(weights: np.ndarray, errors: np.ndarray) -> np.ndarray:
    if np.any(errors <= 0):
        raise ValueError("MMSE errors must be positive")
    return np.asarray(weights) / errors


def assemble_sdr(h_eff: np.ndarray, s: np.ndarray, omega: np.ndarray,
                 steering: np.ndarray, power: PowerBudget, g: np.ndarray,
                 psi: np.ndarray, ris_noise_w: float) -> BlockSdp:
    """Build the homogenized block SDP for the current WMMSE state.

    Objective blocks Q_k = omega_k C_{k,2} + sum_{j != k} omega_j C_{j,1};
    radar constraint via Z~ (zero-padded M_s I - a a^H), RIS constraint via
    Y~ (zero-padded G^H Psi Psi^H G) with right side P~_a = P_a - ||psi||^2
    sigma_1^2.
    """
    k_users, m_s = h_eff.shape
    dim = m_s + 1
    p_s = power.bs_power

    c1 = []
    c2 = []
    for k in range(k_users):
        hk = h_eff[k][:, None]
        outer = np.abs(s[k]) ** 2 * (hk @ hk.conj().T)
        blk1 = np.zeros((dim, dim), dtype=complex)
        blk1[:m_s, :m_s] = outer
        blk2 = blk1.copy()
        blk2[:m_s, m_s] = -np.conj(s[k]) * h_eff[k]
        blk2[m_s, :m_s] = -s[k] * h_eff[k].conj()
        c1.append(blk1)
        c2.append(blk2)
    q_blocks = []
    for k in range(k_users):
        q = omega[k] * c2[k]
        for j in range(k_users):
            if j != k:
                q = q + omega[j] * c1[j]
        q_blocks.append(0.5 * (q + q.conj().T))

    z_bar = m_s * np.eye(m_s) - np.outer(steering, steering.conj())
    z_tilde = np.zeros((dim, dim), dtype=complex)
    z_tilde[:m_s, :m_s] = z_bar

    y_bar = g.conj().T @ (np.abs(psi)[:, None] ** 2 * g)
    y_tilde = np.zeros((dim, dim), dtype=complex)
    y_tilde[:m_s, :m_s] = 0.5 * (y_bar + y_bar.conj().T)

    p_a_eff = power.ris_budget - ris_noise_w * float(np.linalg.norm(psi) ** 2)
    if p_a_eff < -1e-12 * max(power.ris_budget, 1.0):
        raise InfeasibleRisBudgetError(
            f"RIS noise floor exceeds budget: P~_a = {p_a_eff:.3e}")
    p_a_eff = max(p_a_eff, 0.0)

    radar_rhs = (1.0 - power.radar_ratio) * m_s * p_s
    diag_rhs = np.concatenate([np.full(m_s, p_s / m_s), [float(k_users)]])
    return BlockSdp(objective=q_blocks,
                    inequalities=[(z_tilde, radar_rhs), (y_tilde, p_a_eff)],
                    diag_rhs=diag_rhs, corner_value=1.0)


def equalize_row_power(t: np.ndarray, p_s: float) -> np.ndarray:
    """Rescale every antenna row so its squared norm is exactly P_s / M_s.

    Zero rows are filled with equal-magnitude entries to stay total."""
    m_s, k = t.shape
    target = np.sqrt(p_s / m_s)
    out = t.astype(complex).copy()
    norms = np.linalg.norm(out, axis=1)
    for m in range(m_s):
        if norms[m] == 0:
            out[m] = target / np.sqrt(k)
        else:
            out[m] *= target / norms[m]
    return out


def _constraints_ok(t: np.ndarray, steering: np.ndarray, g: np.ndarray, psi: np.ndarray,
                    power: PowerBudget, ris_noise_w: float, rtol: float = _FEAS_RTOL) -> bool:
    if radar_power(t, steering) < power.radar_floor * (1.0 - rtol):
        return False
    return ris_power(t, g, psi, ris_noise_w) <= power.ris_budget * (1.0 + rtol) + 1e-300


def _blend_to_anchor(t_cand: np.ndarray, t_anchor: np.ndarray, steering: np.ndarray,
                     g: np.ndarray, psi: np.ndarray, power: PowerBudget,
                     ris_noise_w: float) -> Optional[np.ndarray]:
    """Smallest blend towards a known-feasible anchor that restores feasibility."""
    def candidate(beta: float) -> np.ndarray:
        return equalize_row_power((1.0 - beta) * t_cand + beta * t_anchor, power.bs_power)

    if not _constraints_ok(candidate(1.0), steering, g, psi, power, ris_noise_w):
        return None
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _constraints_ok(candidate(mid), steering, g, psi, power, ris_noise_w):
            hi = mid
        else:
            lo = mid
    return candidate(hi)


def recover_beamformer(blocks: list[np.ndarray], power: PowerBudget,
                       steering: np.ndarray, g: np.ndarray, psi: np.ndarray,
                       noise: NoiseModel, h_eff: np.ndarray, h_ris: np.ndarray,
                       weights: np.ndarray, rng: np.random.Generator,
                       anchor: Optional[np.ndarray] = None,
                       n_randomizations: int = 100) -> np.ndarray:
    """Rank-one recovery: eigenvector truncation, then per-antenna power
    repair; Gaussian randomization (and blending towards a feasible anchor,
    when given) if the truncated point violates the radar or RIS constraint.
    """
    m_s = len(steering)

    def extract(tilde_cols: np.ndarray) -> Optional[np.ndarray]:
        t = np.empty((m_s, len(blocks)), dtype=complex)
        for k in range(len(blocks)):
            tail = tilde_cols[m_s, k]
            if abs(tail) < 1e-12:
                return None
            t[:, k] = tilde_cols[:m_s, k] / tail
        return equalize_row_power(t, power.bs_power)

    tilde = np.empty((m_s + 1, len(blocks)), dtype=complex)
    for k, w in enumerate(blocks):
        vals, vecs = np.linalg.eigh(0.5 * (w + w.conj().T))
        tilde[:, k] = np.sqrt(max(vals[-1], 0.0)) * vecs[:, -1]
    t_eig = extract(tilde)
    if t_eig is not None and _constraints_ok(t_eig, steering, g, psi, power,
                                             noise.ris_noise_w):
        return t_eig

    # Gaussian randomization fallback
    best_t, best_wsr = None, -np.inf
    chols = []
    for w in blocks:
        h = 0.5 * (w + w.conj().T)
        vals, vecs = np.linalg.eigh(h)
        chols.append(vecs * np.sqrt(np.maximum(vals, 0.0)))
    for _ in range(n_randomizations):
        draw = np.empty((m_s + 1, len(blocks)), dtype=complex)
        for k, c in enumerate(chols):
            xi = (rng.standard_normal(m_s + 1) + 1j * rng.standard_normal(m_s + 1)) / np.sqrt(2)
            draw[:, k] = c @ xi
        t = extract(draw)
        if t is None or not _constraints_ok(t, steering, g, psi, power, noise.ris_noise_w):
            continue
        val = wsr(t, h_eff, h_ris, psi, noise, weights)
        if val > best_wsr:
            best_t, best_wsr = t, val
    if best_t is not None:
        return best_t

    if anchor is not None and t_eig is not None:
        blended = _blend_to_anchor(t_eig, anchor, steering, g, psi, power, noise.ris_noise_w)
        if blended is not None:
            return blended
    if anchor is not None and _constraints_ok(anchor, steering, g, psi, power,
                                              noise.ris_noise_w):
        return anchor.copy()

    diag = {
        "eig_radar_power": None if t_eig is None else radar_power(t_eig, steering),
        "eig_ris_power": None if t_eig is None else ris_power(t_eig, g, psi, noise.ris_noise_w),
        "radar_floor": power.radar_floor,
        "ris_budget": power.ris_budget,
        "randomizations": n_randomizations,
    }
    raise RankOneRecoveryError("no feasible rank-one candidate", diag)


def update_transmit_beamformer(t_current: np.ndarray, h_eff: np.ndarray,
                               g: np.ndarray, psi: np.ndarray, h_ris: np.ndarray,
                               steering: np.ndarray, power: PowerBudget,
                               noise: NoiseModel, weights: np.ndarray,
                               rng: np.random.Generator,
                               sdp_tol: float = 1e-7, sdp_max_iters: int = 20000,
                               warm_state: Optional[tuple] = None,
                               ) -> tuple[np.ndarray, SdpSolution]:
    """One full T-block update for fixed psi.

    Composes the MMSE state update, SDR assembly and solve, and rank-one
    recovery.  The returned beamformer never has a lower weighted sum-rate
    than the incumbent (the incumbent is kept when relaxation-plus-repair
    slack would reduce it).
    """
    s = mmse_receivers(t_current, h_eff, h_ris, psi, noise)
    errors = mmse_errors(t_current, h_eff, h_ris, psi, noise)
    omega = wmmse_weights(weights, errors)
    problem = assemble_sdr(h_eff, s, omega, steering, power, g, psi, noise.ris_noise_w)
    solution = solve_block_sdp(problem, tol=sdp_tol, max_iters=sdp_max_iters,
                               warm_state=warm_state)
    if solution.status == "infeasible":
        raise RankOneRecoveryError("SDR affine constraints inconsistent",
                                   solution.residuals)
    t_new = recover_beamformer(solution.blocks, power, steering, g, psi, noise,
                               h_eff, h_ris, weights, rng, anchor=t_current)
    wsr_cur = wsr(t_current, h_eff, h_ris, psi, noise, weights)
    wsr_new = wsr(t_new, h_eff, h_ris, psi, noise, weights)
    if wsr_new < wsr_cur:
        return t_current.copy(), solution
    return t_new, solution
