"""Scenario execution, baselines, sweeps, and CSV/JSON result emission.

CSV schemas (floating-point fields printed with 9 significant digits):
  results:     axis_value, seed, as_mode, wsr_bits, radar_power_w,
               ris_power_w, iters, wall_ms, status
  trace:       as_mode, seed, iter, wsr_bits
  beampattern: angle_deg, power_w
The JSON summary mirrors the aggregates and carries a provenance block
(config hash, seed list, package version).

Baseline modes share channel realizations seed-for-seed with the cuckoo
mode, so comparisons are paired.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__ as _pkg_version
from .channels import AntennaSubset, ChannelSet, generate_channels
from .config import ConfigError, ScenarioConfig
from .metrics import beampattern as eval_beampattern
from .optimizer import OptimizationError, Solution, optimize
from .selection import cuckoo_search

SWEEP_AXES = ("N", "P", "eta", "rho", "Ms")
_RANDOM_SUBSET_STREAM = 0x5AB5


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def subset_for_mode(mode: str, channels: ChannelSet, scenario: ScenarioConfig,
                    seed: int) -> AntennaSubset:
    """Antenna subset per AS mode; 'random' draws are seeded per channel seed."""
    m = scenario.geometry.num_antennas
    m_s = scenario.num_selected
    if mode == "full":
        return AntennaSubset.full(m)
    if mode == "contiguous":
        return AntennaSubset(tuple(range(m_s)))
    if mode == "random":
        rng = np.random.default_rng(np.random.SeedSequence([seed, _RANDOM_SUBSET_STREAM]))
        return AntennaSubset(tuple(np.sort(rng.choice(m, size=m_s, replace=False))))
    if mode == "cuckoo":
        params = dataclasses.replace(scenario.cuckoo, rng_seed=seed)
        return cuckoo_search(channels, scenario, params).subset
    raise ConfigError(f"unknown AS mode {mode!r}")


@dataclass
class RunReport:
    rows: list[dict]
    traces: list[dict]
    config_hash: str
    seeds: list[int]
    axis: str | None = None

    def aggregates(self) -> list[dict]:
        """Mean/stddev WSR grouped by (axis_value, as_mode)."""
        groups: dict[tuple, list[float]] = {}
        for row in self.rows:
            if row["status"] != "ok":
                continue
            key = (row["axis_value"], row["as_mode"])
            groups.setdefault(key, []).append(row["wsr_bits"])
        out = []
        for (axis_value, mode), vals in sorted(groups.items()):
            arr = np.asarray(vals)
            out.append({
                "axis_value": axis_value,
                "as_mode": mode,
                "mean_wsr_bits": float(arr.mean()),
                "std_wsr_bits": float(arr.std(ddof=1)) if len(arr) > 1 else 0.0,
                "n": len(arr),
            })
        return out

    def mean_wsr(self, axis_value=None, as_mode=None) -> float:
        vals = [r["wsr_bits"] for r in self.rows
                if r["status"] == "ok"
                and (axis_value is None or r["axis_value"] == axis_value)
                and (as_mode is None or r["as_mode"] == as_mode)]
        return float(np.mean(vals))


def _apply_axis(config: ScenarioConfig, axis: str, value: float) -> ScenarioConfig:
    if axis == "N":
        geom = dataclasses.replace(config.geometry, num_ris_elements=int(value))
        return dataclasses.replace(config, geometry=geom)
    if axis == "P":
        # sweep values are given in dBm
        power = dataclasses.replace(config.power, total_w=10.0 ** ((value - 30.0) / 10.0))
        return dataclasses.replace(config, power=power)
    if axis == "eta":
        power = dataclasses.replace(config.power, radar_ratio=float(value))
        return dataclasses.replace(config, power=power)
    if axis == "rho":
        # the rho trade-off holds the radar detection power eta*rho*P fixed,
        # so the probing fraction rescales with the split (capped at 1)
        eta = min(1.0, config.power.radar_ratio * config.power.split_ratio
                  / float(value))
        power = dataclasses.replace(config.power, split_ratio=float(value),
                                    radar_ratio=eta)
        return dataclasses.replace(config, power=power)
    if axis == "Ms":
        return dataclasses.replace(config, num_selected=int(value))
    raise ConfigError(f"unknown sweep axis {axis!r}; use one of {SWEEP_AXES}")


def run_scenario(config: ScenarioConfig, axis_value: float = 0.0) -> RunReport:
    """Run num_seeds seeded realizations of one scenario configuration.

    Per seed: generate channels, select the subset for the configured AS
    mode, optimize, and record one row.  A per-seed optimizer failure is
    recorded as a failed row and the run continues.
    """
    config.validate()
    base = config.channel.rng_seed
    seeds = list(range(base, base + config.num_seeds))
    rows: list[dict] = []
    traces: list[dict] = []
    for seed in seeds:
        params = dataclasses.replace(config.channel, rng_seed=seed)
        channels = generate_channels(config.geometry, params)
        scenario = dataclasses.replace(config, channel=params)
        try:
            subset = subset_for_mode(config.as_mode, channels, scenario, seed)
            opt_cfg = dataclasses.replace(config.optimizer, rng_seed=seed)
            sol = optimize(channels, subset, scenario, opt_cfg)
        except OptimizationError:
            rows.append({
                "axis_value": axis_value, "seed": seed, "as_mode": config.as_mode,
                "wsr_bits": math.nan, "radar_power_w": math.nan,
                "ris_power_w": math.nan, "iters": 0, "wall_ms": 0.0,
                "status": "failed",
            })
            continue
        rows.append({
            "axis_value": axis_value, "seed": seed, "as_mode": config.as_mode,
            "wsr_bits": sol.wsr, "radar_power_w": sol.radar_power,
            "ris_power_w": sol.ris_power, "iters": sol.iterations,
            "wall_ms": sol.wall_ms, "status": "ok",
        })
        for i, val in enumerate(sol.wsr_trace):
            traces.append({"as_mode": config.as_mode, "seed": seed,
                           "iter": i, "wsr_bits": val})
    return RunReport(rows=rows, traces=traces, config_hash=config.config_hash(),
                     seeds=seeds)


def sweep(config: ScenarioConfig, axis: str, values: list[float]) -> RunReport:
    """One run_scenario per axis value with the shared seed list."""
    if list(values) != sorted(values):
        raise ConfigError("sweep values must be sorted ascending")
    merged = RunReport(rows=[], traces=[], config_hash=config.config_hash(),
                       seeds=[], axis=axis)
    for value in values:
        sub = run_scenario(_apply_axis(config, axis, value), axis_value=value)
        merged.rows.extend(sub.rows)
        merged.traces.extend(sub.traces)
        merged.seeds = sub.seeds
    merged.rows.sort(key=lambda r: (r["axis_value"], r["seed"]))
    return merged


RESULT_COLUMNS = ("axis_value", "seed", "as_mode", "wsr_bits", "radar_power_w",
                  "ris_power_w", "iters", "wall_ms", "status")
TRACE_COLUMNS = ("as_mode", "seed", "iter", "wsr_bits")


def write_results_csv(report: RunReport, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(RESULT_COLUMNS) + "\n")
        for row in report.rows:
            cells = []
            for col in RESULT_COLUMNS:
                val = row[col]
                cells.append(_fmt(val) if isinstance(val, float) else str(val))
            fh.write(",".join(cells) + "\n")


def write_trace_csv(report: RunReport, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(TRACE_COLUMNS) + "\n")
        for row in report.traces:
            cells = [str(row["as_mode"]), str(row["seed"]), str(row["iter"]),
                     _fmt(row["wsr_bits"])]
            fh.write(",".join(cells) + "\n")


def write_summary_json(report: RunReport, config: ScenarioConfig, path: str) -> None:
    summary = {
        "provenance": {
            "config_hash": report.config_hash,
            "seeds": report.seeds,
            "version": _pkg_version,
        },
        "axis": report.axis,
        "aggregates": report.aggregates(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")


def emit_beampattern(config: ScenarioConfig, solution: Solution, path: str,
                     grid_deg: np.ndarray | None = None) -> np.ndarray:
    """Write the (angle_deg, power_w) beampattern CSV for one solution."""
    if grid_deg is None:
        grid_deg = np.arange(-90.0, 90.0 + 0.25, 0.5)
    grid_deg = np.asarray(grid_deg, dtype=float)
    powers = eval_beampattern(solution.t, solution.subset, np.radians(grid_deg),
                              config.channel.d_over_lambda)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("angle_deg,power_w\n")
        for ang, p in zip(grid_deg, powers):
            fh.write(f"{_fmt(ang)},{_fmt(p)}\n")
    return powers


def write_report(report: RunReport, config: ScenarioConfig, out_dir: str,
                 prefix: str = "results") -> dict[str, str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "results": os.path.join(out_dir, f"{prefix}.csv"),
        "trace": os.path.join(out_dir, "trace.csv"),
        "summary": os.path.join(out_dir, f"{prefix}_summary.json"),
    }
    write_results_csv(report, paths["results"])
    write_trace_csv(report, paths["trace"])
    write_summary_json(report, config, paths["summary"])
    return paths
