"""Seeded channel generation, steering vectors, and subchannel selection.

The base station and the RIS are modelled as half-wavelength uniform linear
arrays.  BS-to-RIS and RIS-to-user links are Rician (deterministic
line-of-sight component from array geometry plus Gaussian scatter); direct
BS-to-user links are Rayleigh.  All entries are scaled by the distance power
law PL(d) = PL0 * d^(-beta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ChannelParams, SystemGeometry


@dataclass(frozen=True)
class AntennaSubset:
    """Ordered set of distinct antenna indices (canonically sorted)."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise ValueError(f"antenna indices must be distinct, got {idx}")
        if any(i < 0 for i in idx):
            raise ValueError(f"antenna indices must be nonnegative, got {idx}")
        object.__setattr__(self, "indices", tuple(sorted(idx)))

    @property
    def size(self) -> int:
        return len(self.indices)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=int)

    def validate(self, num_antennas: int) -> None:
        if self.size > num_antennas or (self.size and self.indices[-1] >= num_antennas):
            raise ValueError(
                f"subset {self.indices} out of range for M={num_antennas}"
            )

    @classmethod
    def full(cls, num_antennas: int) -> "AntennaSubset":
        return cls(tuple(range(num_antennas)))


@dataclass
class ChannelSet:
    """One channel realization for the full M-antenna array.

    g_full:        (N, M) BS -> RIS
    h_direct_full: (K, M) BS -> user k (row k)
    h_ris:         (K, N) RIS -> user k (row k)
    """

    g_full: np.ndarray
    h_direct_full: np.ndarray
    h_ris: np.ndarray

    @property
    def num_antennas(self) -> int:
        return self.g_full.shape[1]


def pathloss(distance: float, ref_db: float, exponent: float) -> float:
    """Linear path loss PL0 * distance^(-exponent) with PL0 given in dB at 1 m."""
    if distance <= 0:
        raise ValueError("node distance must be > 0")
    return 10.0 ** (ref_db / 10.0) * distance ** (-exponent)


def _ula_response(n_elements: int, angle: float, d_over_lambda: float) -> np.ndarray:
    n = np.arange(n_elements)
    return np.exp(2j * np.pi * d_over_lambda * n * math.sin(angle))


def _angle_between(src: tuple[float, float], dst: tuple[float, float]) -> float:
    return math.atan2(dst[1] - src[1], dst[0] - src[0])


def _distance(a, b) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def _cn(rng: np.random.Generator, *shape) -> np.ndarray:
    """Circularly-symmetric complex Gaussian with unit variance per entry."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def generate_channels(geometry: SystemGeometry, params: ChannelParams) -> ChannelSet:
    """Draw one seeded channel realization.

    User positions are drawn uniformly in the configured disc.  The same
    (geometry, params) pair always produces a bit-identical ChannelSet.
    """
    geometry.validate()
    params.validate()
    rng = np.random.default_rng(params.rng_seed)
    m, n, k = geometry.num_antennas, geometry.num_ris_elements, geometry.num_users

    # user positions: uniform in the disc, fixed per realization
    radii = geometry.user_radius * np.sqrt(rng.uniform(size=k))
    phis = rng.uniform(0.0, 2.0 * np.pi, size=k)
    users = [
        (
            geometry.user_center[0] + r * math.cos(p),
            geometry.user_center[1] + r * math.sin(p),
        )
        for r, p in zip(radii, phis)
    ]

    kappa = params.rician_factor
    w_los = math.sqrt(kappa / (1.0 + kappa))
    w_sc = math.sqrt(1.0 / (1.0 + kappa))

    # BS -> RIS
    d_br = _distance(geometry.bs_position, geometry.ris_position)
    pl_g = pathloss(d_br, params.pathloss_ref_db, params.exponent_ris)
    aod = _angle_between(geometry.bs_position, geometry.ris_position)
    aoa = _angle_between(geometry.ris_position, geometry.bs_position)
    los_g = np.outer(
        _ula_response(n, aoa, params.d_over_lambda),
        _ula_response(m, aod, params.d_over_lambda).conj(),
    )
    g_full = math.sqrt(pl_g) * (w_los * los_g + w_sc * _cn(rng, n, m))

    h_direct = np.empty((k, m), dtype=complex)
    h_ris = np.empty((k, n), dtype=complex)
    for i, pos in enumerate(users):
        d_bu = _distance(geometry.bs_position, pos)
        pl_d = pathloss(d_bu, params.pathloss_ref_db, params.exponent_direct)
        h_direct[i] = math.sqrt(pl_d) * _cn(rng, m)

        d_ru = _distance(geometry.ris_position, pos)
        pl_r = pathloss(d_ru, params.pathloss_ref_db, params.exponent_ris)
        los_r = _ula_response(n, _angle_between(geometry.ris_position, pos), params.d_over_lambda)
        h_ris[i] = math.sqrt(pl_r) * (w_los * los_r + w_sc * _cn(rng, n))

    return ChannelSet(g_full=g_full, h_direct_full=h_direct, h_ris=h_ris)


def steering_vector(angle: float, subset: AntennaSubset, d_over_lambda: float = 0.5) -> np.ndarray:
    """Transmit steering vector on the selected (possibly sparse) array.

    Element i is exp(j * 2*pi * (d/lambda) * m_i * sin(angle)) for antenna
    index m_i of the subset.
    """
    idx = subset.as_array()
    return np.exp(2j * np.pi * d_over_lambda * idx * math.sin(angle))


def select_subchannels(channels: ChannelSet, subset: AntennaSubset) -> tuple[np.ndarray, np.ndarray]:
    """Pick the subset's columns out of the full-array channels.

    Returns (G, h_direct) with shapes (N, M_s) and (K, M_s).
    """
    subset.validate(channels.num_antennas)
    idx = subset.as_array()
    return channels.g_full[:, idx].copy(), channels.h_direct_full[:, idx].copy()
