"""Discrete cuckoo-search antenna selection.

Candidate subsets evolve through Levy-flight jumps and a local random
search, with greedy per-nest acceptance; continuous updates are repaired
back to valid index sets (floor, clamp, dedupe, sort).  Fitness is the
weighted sum-rate under a cheap deterministic proxy design: a matched
transmit beamformer with exact per-antenna power plus a single RIS
quadratic-program pass from a fixed-sub-seed random-phase start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import risfp
from .channels import (AntennaSubset, ChannelSet, select_subchannels,
                       steering_vector)
from .config import CuckooParams, ScenarioConfig
from .metrics import effective_channels, wsr

_PROXY_STREAM = 0xF17  # fixed sub-seed tag for the fitness proxy RIS phases


def levy_sigma(delta: float) -> float:
    """Scale of the Gaussian numerator in Mantegna's Levy step generator."""
    if not 0 < delta < 2:
        raise ValueError("levy exponent must lie in (0, 2)")
    num = math.gamma(1.0 + delta) * math.sin(math.pi * delta / 2.0)
    den = math.gamma((1.0 + delta) / 2.0) * delta * 2.0 ** ((delta - 1.0) / 2.0)
    return (num / den) ** (1.0 / delta)


def levy_step(delta: float, rng: np.random.Generator) -> float:
    """One heavy-tailed step u / |s|^(1/delta)."""
    sigma_u = levy_sigma(delta)
    u = rng.normal(0.0, sigma_u)
    s = rng.normal(0.0, 1.0)
    while s == 0.0:
        s = rng.normal(0.0, 1.0)
    return u / abs(s) ** (1.0 / delta)


def levy_update(indices: np.ndarray, step_scale: float, delta: float,
                rng: np.random.Generator) -> np.ndarray:
    """Levy flight applied per coordinate; returns a raw real vector."""
    steps = np.array([levy_step(delta, rng) for _ in range(len(indices))])
    return np.asarray(indices, dtype=float) + step_scale * steps


def local_random_update(c_l: np.ndarray, c_j: np.ndarray, c_k: np.ndarray,
                        discard_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Local random search mixing the difference of two other nests."""
    gamma = rng.uniform(size=len(c_l))
    zeta = rng.uniform(size=len(c_l))
    gate = (discard_prob - zeta > 0).astype(float)
    return np.asarray(c_l, dtype=float) + gamma * gate * (np.asarray(c_j, dtype=float)
                                                          - np.asarray(c_k, dtype=float))


def repair(raw: np.ndarray, num_antennas: int, rng: np.random.Generator) -> AntennaSubset:
    """Floor, clamp into [0, M-1], replace duplicates with random unused
    indices, and sort.  Total: always returns a valid subset."""
    raw = np.asarray(raw, dtype=float)
    if len(raw) > num_antennas:
        raise ValueError("cannot repair a subset larger than the array")
    ints = np.clip(np.floor(raw).astype(int), 0, num_antennas - 1)
    chosen: list[int] = []
    used = set()
    duplicates = 0
    for val in ints:
        if val in used:
            duplicates += 1
        else:
            used.add(val)
            chosen.append(int(val))
    if duplicates:
        free = np.array(sorted(set(range(num_antennas)) - used))
        fill = rng.choice(free, size=duplicates, replace=False)
        chosen.extend(int(v) for v in np.atleast_1d(fill))
    return AntennaSubset(tuple(chosen))


def fitness(subset: AntennaSubset, channels: ChannelSet, scenario: ScenarioConfig) -> float:
    """Proxy weighted sum-rate of a subset: the optimizer's own feasible
    starting point (probing-power floor included) plus one RIS pass.
    Deterministic for fixed (subset, channels, seed)."""
    from . import optimizer

    g, h_direct = select_subchannels(channels, subset)
    noise = scenario.noise
    power = scenario.power
    weights = scenario.user_weights()
    steering = steering_vector(scenario.geometry.target_angle, subset,
                               scenario.channel.d_over_lambda)

    proxy_rng = np.random.default_rng(
        np.random.SeedSequence([scenario.channel.rng_seed, _PROXY_STREAM]))
    t, psi = optimizer.initialize(g, h_direct, channels.h_ris, steering,
                                  scenario, proxy_rng)

    if power.ris_budget > 0:
        psi = risfp.ris_pass(t, g, h_direct, channels.h_ris, psi, noise, weights,
                             power.ris_budget)
    h_eff = effective_channels(h_direct, g, psi, channels.h_ris)
    return wsr(t, h_eff, channels.h_ris, psi, noise, weights)


@dataclass
class CuckooResult:
    subset: AntennaSubset
    fitness: float
    best_trace: list[float]
    iterations: int


def cuckoo_search(channels: ChannelSet, scenario: ScenarioConfig,
                  params: CuckooParams) -> CuckooResult:
    """Search for a high-fitness M_s-subset of the M antennas.

    Per iteration every nest takes a Levy jump then a local random step,
    each accepted greedily; stops after max_iters or when the best fitness
    stagnates over stagnation_window iterations.
    """
    params.validate()
    m = channels.num_antennas
    m_s = scenario.num_selected
    if m_s > m:
        raise ValueError("cannot select more antennas than the array has")
    if m_s == m:
        full = AntennaSubset.full(m)
        val = fitness(full, channels, scenario)
        return CuckooResult(full, val, [val], 0)

    rng = np.random.default_rng(params.rng_seed)
    cache: dict[tuple[int, ...], float] = {}

    def evaluate(subset: AntennaSubset) -> float:
        key = subset.indices
        if key not in cache:
            cache[key] = fitness(subset, channels, scenario)
        return cache[key]

    nests = [AntennaSubset(tuple(np.sort(rng.choice(m, size=m_s, replace=False))))
             for _ in range(params.population)]
    values = [evaluate(s) for s in nests]
    best_idx = int(np.argmax(values))
    best_subset, best_val = nests[best_idx], values[best_idx]
    trace = [best_val]
    since_improvement = 0
    it = 0

    for it in range(1, params.max_iters + 1):
        for l in range(params.population):
            raw = levy_update(nests[l].as_array(), params.step_scale,
                              params.levy_exponent, rng)
            cand = repair(raw, m, rng)
            val = evaluate(cand)
            if val > values[l]:
                nests[l], values[l] = cand, val

        for l in range(params.population):
            j, k = rng.choice(params.population, size=2, replace=False)
            raw = local_random_update(nests[l].as_array(), nests[j].as_array(),
                                      nests[k].as_array(), params.discard_prob, rng)
            cand = repair(raw, m, rng)
            val = evaluate(cand)
            if val > values[l]:
                nests[l], values[l] = cand, val

        round_best = int(np.argmax(values))
        if values[round_best] > best_val + 1e-15:
            best_subset, best_val = nests[round_best], values[round_best]
            since_improvement = 0
        else:
            since_improvement += 1
        trace.append(best_val)
        if since_improvement >= params.stagnation_window:
            break

    return CuckooResult(best_subset, best_val, trace, it)
