"""Scenario configuration, unit conversion, and JSON config file I/O.

All powers are handled in linear watts internally.  dBm values appear only
at the configuration boundary (config files, CLI flags) and are converted on
load/save.  Angles are radians internally, degrees at the boundary.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

AS_MODES = ("cuckoo", "random", "contiguous", "full")


class ConfigError(ValueError):
    """Raised for inconsistent or out-of-range configuration values."""


def watts_from_dbm(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def dbm_from_watts(watts: float) -> float:
    if watts <= 0:
        raise ConfigError(f"cannot express non-positive power {watts} W in dBm")
    return 10.0 * math.log10(watts) + 30.0


@dataclass
class SystemGeometry:
    """Node positions and array sizes of the scenario."""

    bs_position: tuple[float, float] = (0.0, 0.0)
    ris_position: tuple[float, float] = (150.0, 0.0)
    user_center: tuple[float, float] = (150.0, 10.0)
    user_radius: float = 5.0
    num_users: int = 4
    num_antennas: int = 8
    num_ris_elements: int = 36
    # asin(1/3) keeps the radar mainlobe off the grating-friendly directions
    # of small contiguous subarrays, so subset choice genuinely matters.
    target_angle: float = math.asin(1.0 / 3.0)

    def validate(self) -> None:
        if self.num_users < 1 or self.num_antennas < 1 or self.num_ris_elements < 1:
            raise ConfigError("K, M and N must all be >= 1")
        if self.user_radius < 0:
            raise ConfigError("user_radius must be >= 0")
        if not -math.pi / 2 < self.target_angle < math.pi / 2:
            raise ConfigError("target_angle must lie in (-pi/2, pi/2)")


@dataclass
class ChannelParams:
    """Fading and path-loss parameters.

    pathloss_ref_db is the loss at 1 m; defaults follow common simulation
    practice (-30 dB reference, direct exponent 3.5, RIS-side exponent 2.2,
    Rician factor 10).
    """

    pathloss_ref_db: float = -30.0
    exponent_direct: float = 3.5
    exponent_ris: float = 2.2
    rician_factor: float = 10.0
    d_over_lambda: float = 0.5
    rng_seed: int = 0

    def validate(self) -> None:
        if self.exponent_direct < 0 or self.exponent_ris < 0:
            raise ConfigError("path-loss exponents must be >= 0")
        if self.rician_factor < 0:
            raise ConfigError("rician_factor must be >= 0")
        if self.d_over_lambda <= 0:
            raise ConfigError("d_over_lambda must be > 0")


@dataclass
class PowerBudget:
    """Total power and the two split ratios.

    total_w = P, split_ratio = rho, radar_ratio = eta.  Derived quantities:
    bs_power P_s = rho * P, ris_budget P_a = (1 - rho) * P and the probing
    power floor eta * P_s.
    """

    total_w: float = watts_from_dbm(20.0)
    split_ratio: float = 0.9
    radar_ratio: float = 0.75

    @property
    def bs_power(self) -> float:
        return self.split_ratio * self.total_w

    @property
    def ris_budget(self) -> float:
        return (1.0 - self.split_ratio) * self.total_w

    @property
    def radar_floor(self) -> float:
        return self.radar_ratio * self.bs_power

    def validate(self) -> None:
        if self.total_w <= 0:
            raise ConfigError("total power must be > 0")
        if not 0 < self.split_ratio <= 1:
            raise ConfigError("split_ratio must lie in (0, 1]")
        if not 0 <= self.radar_ratio <= 1:
            raise ConfigError("radar_ratio must lie in [0, 1]")


@dataclass
class NoiseModel:
    user_noise_w: float = watts_from_dbm(-20.0)
    ris_noise_w: float = watts_from_dbm(-40.0)

    def validate(self) -> None:
        if self.user_noise_w <= 0 or self.ris_noise_w <= 0:
            raise ConfigError("noise powers must be > 0")


@dataclass
class CuckooParams:
    population: int = 15
    max_iters: int = 50
    levy_exponent: float = 1.5
    step_scale: float = 1.0
    discard_prob: float = 0.25
    stagnation_window: int = 10
    rng_seed: int = 0

    def validate(self) -> None:
        if self.population < 1 or self.max_iters < 1 or self.stagnation_window < 1:
            raise ConfigError("population, max_iters, stagnation_window must be >= 1")
        if not 0 < self.levy_exponent < 2:
            raise ConfigError("levy_exponent must lie in (0, 2)")
        if self.step_scale <= 0:
            raise ConfigError("step_scale must be > 0")
        if not 0 <= self.discard_prob <= 1:
            raise ConfigError("discard_prob must lie in [0, 1]")


@dataclass
class OptimizerConfig:
    max_outer_iters: int = 50
    wsr_tol: float = 1e-4
    sdp_tol: float = 1e-7
    sdp_max_iters: int = 20000
    rng_seed: int = 0

    def validate(self) -> None:
        if self.max_outer_iters < 1:
            raise ConfigError("max_outer_iters must be >= 1")
        if self.wsr_tol <= 0 or self.sdp_tol <= 0:
            raise ConfigError("tolerances must be > 0")
        if self.sdp_max_iters < 1:
            raise ConfigError("sdp_max_iters must be >= 1")


@dataclass
class ScenarioConfig:
    """Everything needed to run one scenario end to end."""

    geometry: SystemGeometry = field(default_factory=SystemGeometry)
    channel: ChannelParams = field(default_factory=ChannelParams)
    power: PowerBudget = field(default_factory=PowerBudget)
    noise: NoiseModel = field(default_factory=NoiseModel)
    weights: Optional[list[float]] = None
    as_mode: str = "cuckoo"
    num_selected: int = 6
    cuckoo: CuckooParams = field(default_factory=CuckooParams)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    num_seeds: int = 1
    out_dir: str = "results"

    def user_weights(self) -> np.ndarray:
        k = self.geometry.num_users
        if self.weights is None:
            return np.full(k, 1.0 / k)
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (k,) or np.any(w < 0):
            raise ConfigError("weights must be K nonnegative values")
        return w

    def validate(self) -> None:
        self.geometry.validate()
        self.channel.validate()
        self.power.validate()
        self.noise.validate()
        self.cuckoo.validate()
        self.optimizer.validate()
        if self.as_mode not in AS_MODES:
            raise ConfigError(f"as_mode must be one of {AS_MODES}")
        if not 1 <= self.num_selected <= self.geometry.num_antennas:
            raise ConfigError("num_selected must lie in [1, num_antennas]")
        if self.num_seeds < 1:
            raise ConfigError("num_seeds must be >= 1")
        self.user_weights()

    # -- JSON boundary ----------------------------------------------------

    def to_dict(self) -> dict:
        g = self.geometry
        c = self.channel
        return {
            "geometry": {
                "bs_position": list(g.bs_position),
                "ris_position": list(g.ris_position),
                "user_center": list(g.user_center),
                "user_radius": g.user_radius,
                "num_users": g.num_users,
                "num_antennas": g.num_antennas,
                "num_ris_elements": g.num_ris_elements,
                "target_angle_deg": math.degrees(g.target_angle),
            },
            "channel": {
                "pathloss_ref_db": c.pathloss_ref_db,
                "exponent_direct": c.exponent_direct,
                "exponent_ris": c.exponent_ris,
                "rician_factor": c.rician_factor,
                "d_over_lambda": c.d_over_lambda,
                "rng_seed": c.rng_seed,
            },
            "power": {
                "total_dbm": dbm_from_watts(self.power.total_w),
                "split_ratio": self.power.split_ratio,
                "radar_ratio": self.power.radar_ratio,
            },
            "noise": {
                "user_dbm": dbm_from_watts(self.noise.user_noise_w),
                "ris_dbm": dbm_from_watts(self.noise.ris_noise_w),
            },
            "weights": self.weights,
            "as_mode": self.as_mode,
            "num_selected": self.num_selected,
            "cuckoo": dataclasses.asdict(self.cuckoo),
            "optimizer": dataclasses.asdict(self.optimizer),
            "num_seeds": self.num_seeds,
            "out_dir": self.out_dir,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        try:
            g = dict(data.get("geometry", {}))
            if "target_angle_deg" in g:
                g["target_angle"] = math.radians(g.pop("target_angle_deg"))
            for key in ("bs_position", "ris_position", "user_center"):
                if key in g:
                    g[key] = tuple(g[key])
            p = dict(data.get("power", {}))
            if "total_dbm" in p:
                p["total_w"] = watts_from_dbm(p.pop("total_dbm"))
            n = dict(data.get("noise", {}))
            if "user_dbm" in n:
                n["user_noise_w"] = watts_from_dbm(n.pop("user_dbm"))
            if "ris_dbm" in n:
                n["ris_noise_w"] = watts_from_dbm(n.pop("ris_dbm"))
            cfg = cls(
                geometry=SystemGeometry(**g),
                channel=ChannelParams(**data.get("channel", {})),
                power=PowerBudget(**p),
                noise=NoiseModel(**n),
                weights=data.get("weights"),
                as_mode=data.get("as_mode", "cuckoo"),
                num_selected=data.get("num_selected", 6),
                cuckoo=CuckooParams(**data.get("cuckoo", {})),
                optimizer=OptimizerConfig(**data.get("optimizer", {})),
                num_seeds=data.get("num_seeds", 1),
                out_dir=data.get("out_dir", "results"),
            )
        except TypeError as exc:
            raise ConfigError(f"bad config structure: {exc}") from exc
        cfg.validate()
        return cfg

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def default_config() -> ScenarioConfig:
    """Baseline scenario: P = 20 dBm, sigma^2 = -20 dBm, sigma_1^2 = -40 dBm,
    K = 4, M = 8, M_s = 6, N = 36, eta = 0.75, rho = 0.9."""
    return ScenarioConfig()


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return ScenarioConfig.from_dict(data)


def save_config(config: ScenarioConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config.to_dict(), fh, indent=2)
        fh.write("\n")
