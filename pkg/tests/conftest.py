import dataclasses
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aris_isac.channels import AntennaSubset, generate_channels, select_subchannels
from aris_isac.config import ScenarioConfig, SystemGeometry, default_config
from aris_isac.metrics import effective_channels


def tiny_config(seed: int = 0, num_users: int = 2, num_antennas: int = 4,
                num_selected: int = 3, num_ris: int = 6) -> ScenarioConfig:
    """Small but otherwise default scenario for fast unit tests."""
    cfg = default_config()
    cfg.geometry = dataclasses.replace(
        cfg.geometry, num_users=num_users, num_antennas=num_antennas,
        num_ris_elements=num_ris)
    cfg.num_selected = num_selected
    cfg.channel = dataclasses.replace(cfg.channel, rng_seed=seed)
    cfg.optimizer = dataclasses.replace(cfg.optimizer, rng_seed=seed)
    cfg.validate()
    return cfg


def random_state(cfg: ScenarioConfig, seed: int = 0):
    """Channels plus a random feasible-shape (T, psi) pair for identity tests."""
    channels = generate_channels(cfg.geometry, cfg.channel)
    subset = AntennaSubset(tuple(range(cfg.num_selected)))
    g, h_direct = select_subchannels(channels, subset)
    rng = np.random.default_rng(seed + 1000)
    m_s, k = cfg.num_selected, cfg.geometry.num_users
    t = (rng.standard_normal((m_s, k)) + 1j * rng.standard_normal((m_s, k)))
    t *= np.sqrt(cfg.power.bs_power) / np.linalg.norm(t)
    n = cfg.geometry.num_ris_elements
    psi = (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    h_eff = effective_channels(h_direct, g, psi, channels.h_ris)
    return channels, subset, g, h_direct, channels.h_ris, t, psi, h_eff


@pytest.fixture
def cfg_tiny():
    return tiny_config()
