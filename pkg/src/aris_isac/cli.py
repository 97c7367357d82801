"""Command-line interface.

Subcommands: run, sweep, beampattern, default-config, selftest.
Exit codes: 0 success, 1 config error, 2 runtime/solver failure, 3 I/O error.
"""

from __future__ import annotations

import dataclasses
import json
import sys

import click
import numpy as np

from . import experiments
from .channels import generate_channels
from .config import (ConfigError, ScenarioConfig, default_config, load_config,
                     save_config)
from .optimizer import OptimizationError, optimize
from .sdp import SdpInputError

EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_IO = 3


def _load(config_path: str | None) -> ScenarioConfig:
    if config_path is None:
        return default_config()
    return load_config(config_path)


def _overrides(config: ScenarioConfig, seed: int | None, seeds: int | None,
               as_mode: str | None, out: str | None) -> ScenarioConfig:
    if seed is not None:
        config = dataclasses.replace(
            config, channel=dataclasses.replace(config.channel, rng_seed=seed))
    if seeds is not None:
        config = dataclasses.replace(config, num_seeds=seeds)
    if as_mode is not None:
        config = dataclasses.replace(config, as_mode=as_mode)
    if out is not None:
        config = dataclasses.replace(config, out_dir=out)
    config.validate()
    return config


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
def main():
    """Joint antenna selection and beamforming toolkit."""


@main.command("default-config")
@click.option("--out", type=click.Path(), default=None, help="write to file instead of stdout")
def default_config_cmd(out):
    """Emit the fully-defaulted scenario config as JSON."""
    cfg = default_config()
    if out is None:
        click.echo(json.dumps(cfg.to_dict(), indent=2))
        return
    try:
        save_config(cfg, out)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {out}: {exc}")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--seeds", type=int, default=None)
@click.option("--as-mode", type=click.Choice(["cuckoo", "random", "contiguous", "full"]),
              default=None)
@click.option("--out", type=click.Path(), default=None)
def run(config_path, seed, seeds, as_mode, out):
    """Run one scenario over its seed list and write results CSV/JSON."""
    try:
        cfg = _overrides(_load(config_path), seed, seeds, as_mode, out)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        report = experiments.run_scenario(cfg)
    except (OptimizationError, SdpInputError, FloatingPointError) as exc:
        _fail(EXIT_RUNTIME, str(exc))
    try:
        paths = experiments.write_report(report, cfg, cfg.out_dir)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write results under {cfg.out_dir}: {exc}")
    click.echo(f"wrote {paths['results']} ({len(report.rows)} rows)")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--axis", type=click.Choice(list(experiments.SWEEP_AXES)), required=True)
@click.option("--values", required=True, help="comma-separated ascending values")
@click.option("--seed", type=int, default=None)
@click.option("--seeds", type=int, default=None)
@click.option("--as-mode", type=click.Choice(["cuckoo", "random", "contiguous", "full"]),
              default=None)
@click.option("--out", type=click.Path(), default=None)
def sweep(config_path, axis, values, seed, seeds, as_mode, out):
    """Sweep one axis (N, P, eta, rho, Ms) with a shared seed list."""
    try:
        cfg = _overrides(_load(config_path), seed, seeds, as_mode, out)
        vals = [float(v) for v in values.split(",") if v.strip()]
        if not vals:
            raise ConfigError("empty --values list")
    except (ConfigError, ValueError) as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        report = experiments.sweep(cfg, axis, vals)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    except (OptimizationError, SdpInputError, FloatingPointError) as exc:
        _fail(EXIT_RUNTIME, str(exc))
    try:
        paths = experiments.write_report(report, cfg, cfg.out_dir, prefix=f"sweep_{axis}")
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write results under {cfg.out_dir}: {exc}")
    click.echo(f"wrote {paths['results']} ({len(report.rows)} rows)")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--as-mode", type=click.Choice(["cuckoo", "random", "contiguous", "full"]),
              default=None)
@click.option("--out", type=click.Path(), default=None)
def beampattern(config_path, seed, as_mode, out):
    """Optimize one seeded realization and emit its beampattern CSV."""
    import os

    try:
        cfg = _overrides(_load(config_path), seed, 1, as_mode, out)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    try:
        channels = generate_channels(cfg.geometry, cfg.channel)
        subset = experiments.subset_for_mode(cfg.as_mode, channels, cfg,
                                             cfg.channel.rng_seed)
        solution = optimize(channels, subset, cfg)
    except (OptimizationError, SdpInputError, ValueError) as exc:
        _fail(EXIT_RUNTIME, str(exc))
    try:
        os.makedirs(cfg.out_dir, exist_ok=True)
        path = os.path.join(cfg.out_dir, "beampattern.csv")
        experiments.emit_beampattern(cfg, solution, path)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write beampattern: {exc}")
    click.echo(f"wrote {path} (wsr={solution.wsr:.6g} bits)")


@main.command()
def selftest():
    """Tiny end-to-end run plus internal identity checks."""
    from . import metrics, risfp, wmmse
    from .channels import AntennaSubset, select_subchannels, steering_vector
    from .metrics import effective_channels

    cfg = default_config()
    geom = dataclasses.replace(cfg.geometry, num_antennas=4, num_ris_elements=8,
                               num_users=2)
    cfg = dataclasses.replace(cfg, geometry=geom, num_selected=3, as_mode="contiguous",
                              optimizer=dataclasses.replace(cfg.optimizer,
                                                            max_outer_iters=5))
    try:
        channels = generate_channels(cfg.geometry, cfg.channel)
        subset = AntennaSubset((0, 1, 2))
        sol = optimize(channels, subset, cfg)
        trace = np.asarray(sol.wsr_trace)
        assert np.all(np.diff(trace) >= -1e-6), "trace not monotone"

        g, h_d = select_subchannels(channels, subset)
        h_eff = effective_channels(h_d, g, sol.psi, channels.h_ris)
        gamma = metrics.sinr_all(sol.t, h_eff, channels.h_ris, sol.psi, cfg.noise)
        errs = wmmse.mmse_errors(sol.t, h_eff, channels.h_ris, sol.psi, cfg.noise)
        assert np.allclose(errs, 1.0 / (1.0 + gamma), atol=1e-12), "MMSE identity"

        eps = np.ones(2, dtype=complex)
        q = risfp.assemble_quadratic(sol.t, g, h_d, channels.h_ris, eps, gamma,
                                     cfg.user_weights(), cfg.noise.ris_noise_w,
                                     cfg.power.ris_budget)
        lhs = metrics.ris_power(sol.t, g, sol.psi, cfg.noise.ris_noise_w)
        rhs = (sol.psi.conj() @ q.pi_mat @ sol.psi).real
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs)), "RIS power identity"
    except AssertionError as exc:
        _fail(EXIT_RUNTIME, f"selftest failed: {exc}")
    except Exception as exc:  # pragma: no cover - defensive
        _fail(EXIT_RUNTIME, f"selftest crashed: {exc}")
    click.echo("selftest ok")


if __name__ == "__main__":
    main()
