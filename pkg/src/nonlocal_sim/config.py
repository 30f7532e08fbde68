"""TOML config files with unit-suffixed keys.

Layout (every section optional except where a subcommand needs it)::

    [source]     n_gamma_per_s, t_run_s, wavelength_m
    [amplifier]  gain
    [plate]      density_kg_per_m3, thickness_m, radius_m, birefringence,
                 design_wavelength_m
    [readout]    tau_s, sigma_omega_rad_per_s
    [geometry]   x1_m, x3_m, collapse_delay_s
    [campaign]   model, seed, repetitions
    [frames]     velocities_m_per_s, near_threshold_rel
    [sweep]      parameter = "section.key", and either values = [...]
                 or start, stop, steps, spacing = "linear" | "log"
    [output]     format = "csv" | "json", path, precision

Unknown sections or keys are rejected. Missing keys take the defaults of
the proposed experiment.
"""
from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np
import tomli
import tomli_w

from .experiment import ExperimentConfig, Model
from .mechdetect import WavePlateSpec

CONFIG_DIR_ENV = "NONLOCAL_SIM_CONFIG_DIR"
DEFAULT_CONFIG_NAME = "paper.cfg"

# (section, key) -> (target, attribute, type); target "exp" or "plate"
EXPERIMENT_KEYS: dict[tuple[str, str], tuple[str, str, type]] = {
    ("source", "n_gamma_per_s"): ("exp", "N_gamma", float),
    ("source", "t_run_s"): ("exp", "t_run", float),
    ("source", "wavelength_m"): ("exp", "lam", float),
    ("amplifier", "gain"): ("exp", "G", float),
    ("plate", "density_kg_per_m3"): ("plate", "rho", float),
    ("plate", "thickness_m"): ("plate", "D", float),
    ("plate", "radius_m"): ("plate", "r", float),
    ("plate", "birefringence"): ("plate", "delta_n", float),
    ("plate", "design_wavelength_m"): ("plate", "lambda_design", float),
    ("readout", "tau_s"): ("exp", "tau", float),
    ("readout", "sigma_omega_rad_per_s"): ("exp", "sigma_omega", float),
    ("geometry", "x1_m"): ("exp", "x1", float),
    ("geometry", "x3_m"): ("exp", "x3", float),
    ("geometry", "collapse_delay_s"): ("exp", "collapse_delay", float),
    ("campaign", "model"): ("exp", "model", str),
    ("campaign", "seed"): ("exp", "seed", int),
    ("campaign", "repetitions"): ("exp", "repetitions", int),
}
SWEEPABLE = {f"{s}.{k}" for (s, k) in EXPERIMENT_KEYS} - {"campaign.model", "campaign.seed"}

_OTHER_KEYS = {
    "frames": {"velocities_m_per_s", "near_threshold_rel"},
    "sweep": {"parameter", "values", "start", "stop", "steps", "spacing"},
    "output": {"format", "path", "precision"},
}


class ConfigError(ValueError):
    def __init__(self, message: str, path=None, line: Optional[int] = None):
        self.message = message
        self.path = path
        self.line = line
        super().__init__(self.diagnostic())

    def diagnostic(self) -> str:
        where = str(self.path) if self.path is not None else "<config>"
        if self.line is not None:
            where += f":{self.line}"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class FramesOptions:
    velocities: tuple[float, ...] = (-10.0, -3.0, 0.0, 3.0, 10.0)
    near_threshold_rel: float = 0.01


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class OutputOptions:
    format: str = "csv"
    path: Optional[str] = None
    precision: int = 9


@dataclass(frozen=True)
class ConfigFile:
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)
    frames: FramesOptions = field(default_factory=FramesOptions)
    sweep: Optional[SweepSpec] = None
    output: OutputOptions = field(default_factory=OutputOptions)


def _find_line(text: str, section: str, key: Optional[str] = None) -> Optional[int]:
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        m = re.match(r"^\[\s*([A-Za-z0-9_.-]+)\s*\]", line)
        if m:
            current = m.group(1)
            if key is None and current == section:
                return lineno
            continue
        if key is not None and current == section and re.match(rf"^{re.escape(key)}\s*=", line):
            return lineno
    return None


def _coerce(value, typ: type, section: str, key: str, where):
    name = f"{section}.{key}"
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number, got {value!r}", *where)
        return float(value)
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name} must be an integer, got {value!r}", *where)
        return value
    if not isinstance(value, str):
        raise ConfigError(f"{name} must be a string, got {value!r}", *where)
    return value


def _sweep_values(sec: dict, text: str, path) -> tuple[float, ...]:
    where = (path, _find_line(text, "sweep"))
    if "values" in sec:
        if any(k in sec for k in ("start", "stop", "steps", "spacing")):
            raise ConfigError("sweep takes either values or start/stop/steps, not both", *where)
        vals = sec["values"]
        if not isinstance(vals, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals
        ):
            raise ConfigError("sweep.values must be a list of numbers", path, _find_line(text, "sweep", "values"))
        return tuple(float(v) for v in vals)
    missing = [k for k in ("start", "stop", "steps") if k not in sec]
    if missing:
        raise ConfigError(f"sweep is missing {', '.join(missing)}", *where)
    start = _coerce(sec["start"], float, "sweep", "start", where)
    stop = _coerce(sec["stop"], float, "sweep", "stop", where)
    steps = _coerce(sec["steps"], int, "sweep", "steps", where)
    spacing = sec.get("spacing", "linear")
    if steps < 1:
        raise ConfigError("sweep.steps must be >= 1", path, _find_line(text, "sweep", "steps"))
    if spacing == "linear":
        grid = np.linspace(start, stop, steps)
    elif spacing == "log":
        if start <= 0 or stop <= 0:
            raise ConfigError("log sweep needs positive start and stop", *where)
        grid = np.geomspace(start, stop, steps)
    else:
        raise ConfigError(f"sweep.spacing must be 'linear' or 'log', got {spacing!r}",
                          path, _find_line(text, "sweep", "spacing"))
    return tuple(float(v) for v in grid)


def parse_config(text: str, path=None) -> ConfigFile:
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        m = re.search(r"\(at line (\d+), column \d+\)", str(exc))
        line = int(m.group(1)) if m else None
        raise ConfigError(f"malformed config: {exc}", path, line) from None

    known_sections = {s for s, _ in EXPERIMENT_KEYS} | set(_OTHER_KEYS)
    for section, body in data.items():
        if section not in known_sections:
            raise ConfigError(f"unknown section [{section}]", path, _find_line(text, section))
        if not isinstance(body, dict):
            raise ConfigError(f"{section} must be a table", path, _find_line(text, section))
        allowed = {k for s, k in EXPERIMENT_KEYS if s == section} | _OTHER_KEYS.get(section, set())
        for key in body:
            if key not in allowed:
                raise ConfigError(f"unknown key {section}.{key}", path, _find_line(text, section, key))

    exp_kwargs: dict = {}
    plate_kwargs: dict = {}
    for (section, key), (target, attr, typ) in EXPERIMENT_KEYS.items():
        if key in data.get(section, {}):
            where = (path, _find_line(text, section, key))
            value = _coerce(data[section][key], typ, section, key, where)
            if attr == "model":
                try:
                    value = Model(value)
                except ValueError:
                    choices = ", ".join(m.value for m in Model)
                    raise ConfigError(f"campaign.model must be one of {choices}", *where) from None
            (exp_kwargs if target == "exp" else plate_kwargs)[attr] = value

    try:
        plate = WavePlateSpec(**plate_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc), path, _find_line(text, "plate")) from None
    try:
        experiment = ExperimentConfig(plate=plate, **exp_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc), path) from None

    frames = FramesOptions()
    if "frames" in data:
        sec = data["frames"]
        kw = {}
        if "velocities_m_per_s" in sec:
            where = (path, _find_line(text, "frames", "velocities_m_per_s"))
            vals = sec["velocities_m_per_s"]
            if not isinstance(vals, list):
                raise ConfigError("frames.velocities_m_per_s must be a list", *where)
            kw["velocities"] = tuple(_coerce(v, float, "frames", "velocities_m_per_s", where) for v in vals)
        if "near_threshold_rel" in sec:
            where = (path, _find_line(text, "frames", "near_threshold_rel"))
            kw["near_threshold_rel"] = _coerce(sec["near_threshold_rel"], float, "frames", "near_threshold_rel", where)
        frames = FramesOptions(**kw)

    sweep = None
    if "sweep" in data:
        sec = data["sweep"]
        if "parameter" not in sec:
            raise ConfigError("sweep.parameter is required", path, _find_line(text, "sweep"))
        param = sec["parameter"]
        if param not in SWEEPABLE:
            raise ConfigError(
                f"cannot sweep unknown parameter {param!r} (choose from {', '.join(sorted(SWEEPABLE))})",
                path, _find_line(text, "sweep", "parameter"),
            )
        sweep = SweepSpec(param, _sweep_values(sec, text, path))

    output = OutputOptions()
    if "output" in data:
        sec = data["output"]
        fmt = sec.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise ConfigError(f"output.format must be csv or json, got {fmt!r}", path, _find_line(text, "output", "format"))
        precision = sec.get("precision", 9)
        if isinstance(precision, bool) or not isinstance(precision, int) or not 1 <= precision <= 17:
            raise ConfigError("output.precision must be an integer in [1, 17]", path, _find_line(text, "output", "precision"))
        out_path = sec.get("path") or None
        output = OutputOptions(fmt, out_path, precision)

    return ConfigFile(experiment, frames, sweep, output)


def to_dict(cfg: ConfigFile) -> dict:
    exp = cfg.experiment
    data: dict = {}
    for (section, key), (target, attr, _) in EXPERIMENT_KEYS.items():
        value = getattr(exp if target == "exp" else exp.plate, attr)
        if isinstance(value, Model):
            value = value.value
        data.setdefault(section, {})[key] = value
    data["frames"] = {
        "velocities_m_per_s": list(cfg.frames.velocities),
        "near_threshold_rel": cfg.frames.near_threshold_rel,
    }
    if cfg.sweep is not None:
        data["sweep"] = {"parameter": cfg.sweep.parameter, "values": list(cfg.sweep.values)}
    out = {"format": cfg.output.format, "precision": cfg.output.precision}
    if cfg.output.path:
        out["path"] = cfg.output.path
    data["output"] = out
    return data


def dumps(cfg: ConfigFile) -> str:
    return tomli_w.dumps(to_dict(cfg))


def config_hash(cfg: ConfigFile) -> str:
    """Short SHA-256 over the canonical form of every input that affects results."""
    data = to_dict(cfg)
    data.pop("output", None)
    blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def set_parameter(cfg: ConfigFile, parameter: str, value: float) -> ConfigFile:
    """Copy of `cfg` with one "section.key" parameter replaced."""
    section, key = parameter.split(".", 1)
    target, attr, typ = EXPERIMENT_KEYS[(section, key)]
    if typ is int:
        if value != int(value):
            raise ConfigError(f"{parameter} takes integer values, got {value!r}")
        value = int(value)
    exp = cfg.experiment
    try:
        if target == "plate":
            exp = replace(exp, plate=replace(exp.plate, **{attr: value}))
        else:
            exp = replace(exp, **{attr: value})
    except ValueError as exc:
        raise ConfigError(f"{parameter} = {value!r}: {exc}") from None
    return replace(cfg, experiment=exp)


def bundled_config_dir() -> Path:
    return Path(str(resources.files("nonlocal_sim") / "configs"))


def resolve_config_path(name: Optional[str]) -> Path:
    """Locate a config: as given, then under $NONLOCAL_SIM_CONFIG_DIR, then bundled."""
    name = name or DEFAULT_CONFIG_NAME
    path = Path(name)
    if path.is_file():
        return path
    if not path.is_absolute():
        candidates = []
        env_dir = os.environ.get(CONFIG_DIR_ENV)
        if env_dir:
            candidates.append(Path(env_dir) / path)
        candidates.append(bundled_config_dir() / path)
        for cand in candidates:
            if cand.is_file():
                return cand
    raise ConfigError("config file not found", path)


def load_config(name: Optional[str]) -> ConfigFile:
    path = resolve_config_path(name)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", path) from None
    return parse_config(text, path)
