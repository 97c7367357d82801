"""Alternating transmit / RIS beamforming optimization for a fixed antenna
subset: feasible initialization, the T <-> psi block updates, convergence
detection, and the final solution report.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import risfp, wmmse
from .channels import AntennaSubset, ChannelSet, select_subchannels, steering_vector
from .config import OptimizerConfig, ScenarioConfig
from .metrics import effective_channels, radar_power, ris_power, wsr
from .risfp import split_psi


class OptimizationError(RuntimeError):
    """A block update failed twice in a row; carries iteration context."""


@dataclass
class Solution:
    subset: AntennaSubset
    t: np.ndarray
    psi: np.ndarray
    amplitudes: np.ndarray
    phases: np.ndarray
    wsr_trace: list[float]
    radar_power: float
    ris_power: float
    iterations: int
    wall_ms: float
    converged: bool

    @property
    def wsr(self) -> float:
        return self.wsr_trace[-1]


def initialize(g: np.ndarray, h_direct: np.ndarray, h_ris: np.ndarray,
               steering: np.ndarray, scenario: ScenarioConfig,
               rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Feasible starting point.

    T0 is the matched beamformer on the direct channels with exact
    per-antenna power, blended towards the steering direction just enough to
    satisfy the probing-power floor; psi0 has random phases and a uniform
    amplitude scaled so the RIS budget holds with equality.
    """
    power = scenario.power
    noise = scenario.noise
    m_s = g.shape[1]
    k = h_direct.shape[0]
    p_s = power.bs_power

    t_matched = wmmse.equalize_row_power(h_direct.T, p_s)
    t_radar = np.sqrt(p_s / (m_s * k)) * np.repeat(steering[:, None], k, axis=1)

    target = min(power.radar_ratio * (1.0 + 1e-6), 1.0) * p_s
    if radar_power(t_matched, steering) >= target:
        t0 = t_matched
    else:
        def blend(beta: float) -> np.ndarray:
            return wmmse.equalize_row_power((1.0 - beta) * t_matched + beta * t_radar, p_s)

        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if radar_power(blend(mid), steering) >= target:
                hi = mid
            else:
                lo = mid
        t0 = blend(hi)
        if radar_power(t0, steering) < power.radar_floor:
            t0 = blend(1.0)

    n = g.shape[0]
    psi0 = np.exp(2j * np.pi * rng.uniform(size=n))
    raw = ris_power(t0, g, psi0, noise.ris_noise_w)
    if power.ris_budget > 0 and raw > 0:
        psi0 = psi0 * np.sqrt(power.ris_budget / raw)
    else:
        psi0 = np.zeros(n, dtype=complex)
    return t0, psi0


def optimize(channels: ChannelSet, subset: AntennaSubset, scenario: ScenarioConfig,
             config: OptimizerConfig | None = None) -> Solution:
    """Run the alternating design to convergence and assemble the report.

    Per iteration: MMSE state + SDR solve + rank-one recovery (T update),
    then the dual/quadratic-transform pass (psi update).  Stops when the
    weighted sum-rate changes by at most wsr_tol or after max_outer_iters.
    A failed T update falls back to the previous beamformer once; a second
    consecutive failure aborts with context.
    """
    config = config or scenario.optimizer
    config.validate()
    start = time.perf_counter()

    g, h_direct = select_subchannels(channels, subset)
    h_ris = channels.h_ris
    steering = steering_vector(scenario.geometry.target_angle, subset,
                               scenario.channel.d_over_lambda)
    weights = scenario.user_weights()
    noise = scenario.noise
    power = scenario.power

    rng = np.random.default_rng(np.random.SeedSequence([config.rng_seed, 0x0A17]))
    t, psi = initialize(g, h_direct, h_ris, steering, scenario, rng)

    def current_wsr(t_mat, psi_vec) -> float:
        h_eff = effective_channels(h_direct, g, psi_vec, h_ris)
        return wsr(t_mat, h_eff, h_ris, psi_vec, noise, weights)

    trace = [current_wsr(t, psi)]
    warm = None
    failed_last = False
    converged = False
    iterations = 0

    for it in range(1, config.max_outer_iters + 1):
        iterations = it
        h_eff = effective_channels(h_direct, g, psi, h_ris)
        try:
            t, sdp_sol = wmmse.update_transmit_beamformer(
                t, h_eff, g, psi, h_ris, steering, power, noise, weights, rng,
                sdp_tol=config.sdp_tol, sdp_max_iters=config.sdp_max_iters,
                warm_state=warm)
            warm = sdp_sol.warm_state
            failed_last = False
        except (wmmse.RankOneRecoveryError, wmmse.InfeasibleRisBudgetError) as exc:
            if failed_last:
                raise OptimizationError(
                    f"transmit update failed twice (iteration {it}): {exc}") from exc
            failed_last = True
            warm = None  # previous T kept; cold-start the next solve

        if power.ris_budget > 0:
            psi_new = risfp.ris_pass(t, g, h_direct, h_ris, psi, noise, weights,
                                     power.ris_budget)
            if current_wsr(t, psi_new) >= current_wsr(t, psi):
                psi = psi_new

        trace.append(current_wsr(t, psi))
        if abs(trace[-1] - trace[-2]) <= config.wsr_tol:
            converged = True
            break

    amplitudes, phases = split_psi(psi)
    wall_ms = (time.perf_counter() - start) * 1e3
    return Solution(
        subset=subset,
        t=t,
        psi=psi,
        amplitudes=amplitudes,
        phases=phases,
        wsr_trace=trace,
        radar_power=radar_power(t, steering),
        ris_power=ris_power(t, g, psi, noise.ris_noise_w),
        iterations=iterations,
        wall_ms=wall_ms,
        converged=converged,
    )
