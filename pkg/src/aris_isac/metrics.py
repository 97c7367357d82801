"""System-level quantities: effective channels, SINR, weighted sum-rate,
radar probing power, active-RIS power consumption, and beampatterns.

Everything here is pure and stateless.  T has shape (M_s, K) with columns
t_k; psi is the length-N diagonal of the RIS matrix Psi = A * Theta.
"""

from __future__ import annotations

import numpy as np

from .channels import AntennaSubset, steering_vector
from .config import NoiseModel


def effective_channel(h_direct_k: np.ndarray, g: np.ndarray, psi: np.ndarray,
                      h_ris_k: np.ndarray) -> np.ndarray:
    """End-to-end channel h_k = h_dk + G^H Psi h_rk for one user."""
    if g.shape[0] != psi.shape[0] or h_ris_k.shape[0] != psi.shape[0]:
        raise ValueError("RIS dimension mismatch")
    if g.shape[1] != h_direct_k.shape[0]:
        raise ValueError("antenna dimension mismatch")
    return h_direct_k + g.conj().T @ (psi * h_ris_k)


def effective_channels(h_direct: np.ndarray, g: np.ndarray, psi: np.ndarray,
                       h_ris: np.ndarray) -> np.ndarray:
    """All K effective channels stacked as rows, shape (K, M_s)."""
    return h_direct + (psi * h_ris) @ g.conj()


def amplified_noise(h_ris: np.ndarray, psi: np.ndarray, ris_noise_w: float) -> np.ndarray:
    """Per-user RIS-amplified noise power sigma_1^2 * ||h_rk^H Psi^H||^2."""
    return ris_noise_w * (np.abs(h_ris) ** 2 @ np.abs(psi) ** 2)


def sinr_all(t: np.ndarray, h_eff: np.ndarray, h_ris: np.ndarray, psi: np.ndarray,
             noise: NoiseModel) -> np.ndarray:
    """SINR of every user for beamformer T and effective channels h_eff (K, M_s)."""
    gains = np.abs(h_eff.conj() @ t) ** 2          # (K, K): |h_k^H t_i|^2
    signal = np.diag(gains)
    interference = gains.sum(axis=1) - signal
    denom = interference + amplified_noise(h_ris, psi, noise.ris_noise_w) + noise.user_noise_w
    return signal / denom


def sinr(k: int, t: np.ndarray, h_eff: np.ndarray, h_ris: np.ndarray, psi: np.ndarray,
         noise: NoiseModel) -> float:
    return float(sinr_all(t, h_eff, h_ris, psi, noise)[k])


def wsr(t: np.ndarray, h_eff: np.ndarray, h_ris: np.ndarray, psi: np.ndarray,
        noise: NoiseModel, weights: np.ndarray) -> float:
    """Weighted sum-rate sum_k mu_k log2(1 + gamma_k), in bits."""
    gamma = sinr_all(t, h_eff, h_ris, psi, noise)
    return float(np.sum(np.asarray(weights) * np.log2(1.0 + gamma)))


def radar_power(t: np.ndarray, steering: np.ndarray) -> float:
    """Probing power a^H T T^H a / M_s towards the steered direction."""
    m_s = steering.shape[0]
    return float(np.linalg.norm(steering.conj() @ t) ** 2) / m_s


def ris_power(t: np.ndarray, g: np.ndarray, psi: np.ndarray, ris_noise_w: float) -> float:
    """Active-RIS consumption sum_k ||Psi^H G t_k||^2 + ||psi||^2 sigma_1^2."""
    through = g @ t                                # (N, K)
    reflected = np.sum(np.abs(psi[:, None].conj() * through) ** 2)
    return float(reflected + ris_noise_w * np.linalg.norm(psi) ** 2)


def beampattern(t: np.ndarray, subset: AntennaSubset, angle_grid: np.ndarray,
                d_over_lambda: float = 0.5) -> np.ndarray:
    """Probing power evaluated on a grid of angles (radians)."""
    angle_grid = np.asarray(angle_grid, dtype=float)
    if angle_grid.size == 0:
        raise ValueError("angle grid must be nonempty")
    return np.array([
        radar_power(t, steering_vector(a, subset, d_over_lambda)) for a in angle_grid
    ])
