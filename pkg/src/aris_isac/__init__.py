"""Joint antenna selection and transmit / active-RIS beamforming toolkit
for dual-function radar-communication systems."""

__version__ = "0.1.0"

from .channels import (AntennaSubset, ChannelSet, generate_channels,
                       select_subchannels, steering_vector)
from .config import (ChannelParams, ConfigError, CuckooParams, NoiseModel,
                     OptimizerConfig, PowerBudget, ScenarioConfig,
                     SystemGeometry, default_config, load_config, save_config,
                     watts_from_dbm, dbm_from_watts)
from .metrics import (beampattern, effective_channel, effective_channels,
                      radar_power, ris_power, sinr, sinr_all, wsr)
from .optimizer import OptimizationError, Solution, optimize
from .selection import CuckooResult, cuckoo_search, fitness
from .sdp import BlockSdp, SdpSolution, project_psd, solve_block_sdp

__all__ = [
    "AntennaSubset", "ChannelSet", "generate_channels", "select_subchannels",
    "steering_vector", "ChannelParams", "ConfigError", "CuckooParams",
    "NoiseModel", "OptimizerConfig", "PowerBudget", "ScenarioConfig",
    "SystemGeometry", "default_config", "load_config", "save_config",
    "watts_from_dbm", "dbm_from_watts", "beampattern", "effective_channel",
    "effective_channels", "radar_power", "ris_power", "sinr", "sinr_all",
    "wsr", "OptimizationError", "Solution", "optimize", "CuckooResult",
    "cuckoo_search", "fitness", "BlockSdp", "SdpSolution", "project_psd",
    "solve_block_sdp",
]
