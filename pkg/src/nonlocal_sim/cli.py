"""Command-line front end: ``nonlocal-sim run | frames | sweep``.

Exit codes: 0 success, 2 configuration error, 3 runtime / degenerate-math
error. Output is assembled in memory and only written once the command has
succeeded, so a failing invocation leaves no partial table behind.

Configs given by relative path are looked up in the working directory, then
in ``$NONLOCAL_SIM_CONFIG_DIR``, then among the bundled configs
(``paper.cfg``).
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import config as cfgmod
from .config import ConfigError, ConfigFile
from .experiment import ConfigurationError, UndefinedCorrelationError, run_campaign
from .relativity import (
    SPEED_OF_LIGHT,
    DegenerateGeometryError,
    ObserverFrame,
    classify_outcome,
    vli_threshold,
)
from .tables import ResultTable, summary_lines

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

RUN_COLUMNS = ["run_index", "n_L", "n_R", "delta_N", "omega_p_rad_per_s", "theta_deg"]
FRAME_COLUMNS = [
    "v_m_per_s", "t3p_minus_t1p_s", "ordering", "collapsed_before_detector",
    "expected_delta_l_hbar", "near_threshold",
]
SWEEP_COLUMNS = [
    "value", "c_p", "mean_abs_omega_p_rad_per_s", "mean_abs_theta_deg",
    "nominal_omega_p_rad_per_s", "nominal_theta_deg",
]


def _meta(cfg: ConfigFile, command: str) -> dict:
    return {
        "command": command,
        "config_hash": cfgmod.config_hash(cfg),
        "seed": cfg.experiment.seed,
    }


def _with_seed(cfg: ConfigFile, seed: Optional[int]) -> ConfigFile:
    if seed is None:
        return cfg
    try:
        return replace(cfg, experiment=replace(cfg.experiment, seed=seed))
    except ConfigurationError as exc:
        raise ConfigError(str(exc), "--seed") from None


def cmd_run(cfg: ConfigFile, workers: int = 1) -> tuple[ResultTable, dict]:
    result = run_campaign(cfg.experiment, workers=workers)
    table = ResultTable(RUN_COLUMNS, meta=_meta(cfg, "run"))
    for s in result.samples:
        table.add(s.run_index, s.n_L, s.n_R, s.delta_N, s.omega_p, s.theta)
    sm = result.summary
    summary = {
        "model": cfg.experiment.model.value,
        "n_runs": sm.n_runs,
        "n_pairs": sm.n_pairs,
        "c_p": sm.c_p,
        "nominal_delta_N": sm.nominal_delta_N,
        "nominal_omega_p_rad_per_s": sm.nominal_omega_p,
        "nominal_theta_deg": sm.nominal_theta_deg,
        "mean_abs_omega_p_rad_per_s": sm.mean_abs_omega_p,
        "mean_theta_deg": sm.mean_theta_deg,
        "mean_abs_theta_deg": sm.mean_abs_theta_deg,
        "beam_power_W": sm.beam_power_W,
        "moment_of_inertia_kg_m2": sm.moment_of_inertia,
        "vli_threshold_m_per_s": sm.vli_threshold,
    }
    return table, summary


def cmd_frames(cfg: ConfigFile, velocities: Optional[Sequence[float]] = None) -> ResultTable:
    """One row per observer velocity: event order and Charlie's expected output.

    Rows whose |v| lies within ``near_threshold_rel`` of the order-reversal
    speed are flagged; their verdict depends on the exact value of c.
    """
    if velocities is None:
        velocities = cfg.frames.velocities
    for i, v in enumerate(velocities):
        if not abs(v) < SPEED_OF_LIGHT:
            raise ConfigError(f"velocity entry {i} ({v!r} m/s) is not below c", "frames")
    e1, e3 = cfg.experiment.events()
    threshold = vli_threshold(e1, e3)
    rel = cfg.frames.near_threshold_rel
    table = ResultTable(FRAME_COLUMNS, meta={**_meta(cfg, "frames"), "vli_threshold_m_per_s": threshold})
    for v in velocities:
        verdict = classify_outcome(e1, e3, ObserverFrame(v))
        near = threshold > 0 and abs(abs(v) - threshold) <= rel * threshold
        table.add(
            float(v), verdict.t_prime_delta, verdict.ordering.value,
            verdict.collapsed_before_detector, verdict.delta_l_label, near,
        )
    return table


def cmd_sweep(cfg: ConfigFile, workers: int = 1) -> ResultTable:
    if cfg.sweep is None:
        raise ConfigError("config has no [sweep] section")
    spec = cfg.sweep
    table = ResultTable(SWEEP_COLUMNS, meta={**_meta(cfg, "sweep"), "parameter": spec.parameter})
    for value in spec.values:
        step = cfgmod.set_parameter(cfg, spec.parameter, value)
        sm = run_campaign(step.experiment, workers=workers).summary
        table.add(
            float(value), sm.c_p, sm.mean_abs_omega_p, sm.mean_abs_theta_deg,
            sm.nominal_omega_p, sm.nominal_theta_deg,
        )
    return table


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonlocal-sim", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="config file (default: paper.cfg)")
    common.add_argument("--seed", type=int, default=None, help="override campaign.seed (u64)")
    common.add_argument("--out", default=None, help="write the table here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--workers", type=int, default=1, help="worker processes for repetitions")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run one campaign")
    frames = sub.add_parser("frames", parents=[common], help="frame-dependent detector verdicts")
    frames.add_argument(
        "--velocities", nargs="*", type=float, default=None,
        help="observer velocities in m/s (default: [frames] in the config)",
    )
    sub.add_parser("sweep", parents=[common], help="sweep one parameter per [sweep]")
    return parser


def _execute(args) -> tuple[str, str, Optional[str]]:
    """Returns (table text, extra stdout text, output path or None)."""
    cfg = _with_seed(cfgmod.load_config(args.config), args.seed)
    if args.format:
        cfg = replace(cfg, output=replace(cfg.output, format=args.format))
    if args.out:
        cfg = replace(cfg, output=replace(cfg.output, path=args.out))
    fmt, precision = cfg.output.format, cfg.output.precision

    if args.command == "run":
        table, summary = cmd_run(cfg, workers=args.workers)
        return table.render(fmt, precision), summary_lines(summary, fmt, precision), cfg.output.path
    if args.command == "frames":
        return cmd_frames(cfg, args.velocities).render(fmt, precision), "", cfg.output.path
    return cmd_sweep(cfg, workers=args.workers).render(fmt, precision), "", cfg.output.path


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        table_text, extra, out_path = _execute(args)
    except ConfigError as exc:
        print(f"error: {exc.diagnostic()}", file=sys.stderr)
        return EXIT_CONFIG
    except (UndefinedCorrelationError, DegenerateGeometryError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    if out_path:
        _write_atomic(Path(out_path), table_text)
        sys.stdout.write(extra)
    else:
        sys.stdout.write(table_text + extra)
    sys.stdout.flush()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
