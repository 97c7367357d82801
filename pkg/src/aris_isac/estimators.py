"""sklearn-style estimator facade over the functional core.

Both estimators treat a ChannelSet as the data to fit, expose their
hyperparameters through get_params / set_params, and store results in
trailing-underscore attributes, so they compose with the usual sklearn
tooling (cloning, grid search over ScenarioConfig fields, pipelines that
pass channel realizations through).
"""

from __future__ import annotations

import dataclasses

import numpy as np
from sklearn.base import BaseEstimator

from . import selection
from .channels import AntennaSubset, ChannelSet
from .config import ScenarioConfig, default_config
from .experiments import subset_for_mode
from .metrics import beampattern
from .optimizer import Solution, optimize


def check_channels(channels: ChannelSet, scenario: ScenarioConfig) -> ChannelSet:
    """Validate a ChannelSet against the scenario dimensions."""
    g = scenario.geometry
    if channels.g_full.shape != (g.num_ris_elements, g.num_antennas):
        raise ValueError(f"g_full must be (N, M) = ({g.num_ris_elements}, {g.num_antennas})")
    if channels.h_direct_full.shape != (g.num_users, g.num_antennas):
        raise ValueError("h_direct_full must be (K, M)")
    if channels.h_ris.shape != (g.num_users, g.num_ris_elements):
        raise ValueError("h_ris must be (K, N)")
    for arr in (channels.g_full, channels.h_direct_full, channels.h_ris):
        if not np.all(np.isfinite(arr)):
            raise ValueError("channel entries must be finite")
    return channels


class CuckooAntennaSelector(BaseEstimator):
    """Selects an antenna subset from a channel realization.

    Parameters: a ScenarioConfig (defaults to the baseline scenario).
    After fit: subset_, fitness_, trace_.
    """

    def __init__(self, scenario: ScenarioConfig | None = None):
        self.scenario = scenario

    def _scenario(self) -> ScenarioConfig:
        return self.scenario if self.scenario is not None else default_config()

    def fit(self, channels: ChannelSet, y=None) -> "CuckooAntennaSelector":
        scenario = self._scenario()
        check_channels(channels, scenario)
        result = selection.cuckoo_search(channels, scenario, scenario.cuckoo)
        self.subset_ = result.subset
        self.fitness_ = result.fitness
        self.trace_ = result.best_trace
        return self

    def transform(self, channels: ChannelSet) -> tuple[np.ndarray, np.ndarray]:
        """Subchannels (G, h_direct) of the fitted subset."""
        from .channels import select_subchannels

        if not hasattr(self, "subset_"):
            raise RuntimeError("call fit before transform")
        return select_subchannels(channels, self.subset_)


class JointBeamformingEstimator(BaseEstimator):
    """Full pipeline: antenna selection (per as_mode) plus alternating
    transmit / RIS beamforming.

    After fit: solution_, subset_, transmit_beamformer_, ris_state_, wsr_.
    predict(angles) returns the transmit beampattern at the given angles.
    """

    def __init__(self, scenario: ScenarioConfig | None = None, seed: int = 0):
        self.scenario = scenario
        self.seed = seed

    def _scenario(self) -> ScenarioConfig:
        return self.scenario if self.scenario is not None else default_config()

    def fit(self, channels: ChannelSet, y=None) -> "JointBeamformingEstimator":
        scenario = self._scenario()
        check_channels(channels, scenario)
        subset = subset_for_mode(scenario.as_mode, channels, scenario, self.seed)
        opt_cfg = dataclasses.replace(scenario.optimizer, rng_seed=self.seed)
        solution: Solution = optimize(channels, subset, scenario, opt_cfg)
        self.solution_ = solution
        self.subset_ = solution.subset
        self.transmit_beamformer_ = solution.t
        self.ris_state_ = solution.psi
        self.wsr_ = solution.wsr
        return self

    def predict(self, angles: np.ndarray) -> np.ndarray:
        if not hasattr(self, "solution_"):
            raise RuntimeError("call fit before predict")
        scenario = self._scenario()
        return beampattern(self.solution_.t, self.subset_, np.asarray(angles, dtype=float),
                           scenario.channel.d_over_lambda)

    def score(self, channels: ChannelSet = None, y=None) -> float:
        if not hasattr(self, "wsr_"):
            raise RuntimeError("call fit before score")
        return self.wsr_
